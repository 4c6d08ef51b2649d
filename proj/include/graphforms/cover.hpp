#ifndef GRAPHFORMS_COVER_HPP
#define GRAPHFORMS_COVER_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "graphforms/errors.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

/**
 * Finite cover of the vertex set by labeled subsets.  A valid cover's sets
 * are nonempty, each induces a connected subgraph, and their union is the
 * whole vertex set.  Labels are optional; set_label() falls back to "U<k>".
 */
struct Cover {
    std::vector<std::vector<int>> sets;
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(sets.size()); }

    std::string set_label(int k) const {
        if (k >= 0 && k < static_cast<int>(labels.size()) && !labels[static_cast<size_t>(k)].empty())
            return labels[static_cast<size_t>(k)];
        return "U" + std::to_string(k);
    }
};

/// Sorted, deduplicated copies of the cover's sets.
inline std::vector<std::vector<int>> normalized_sets(const Cover& cover) {
    std::vector<std::vector<int>> sets = cover.sets;
    for (auto& s : sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return sets;
}

/// Throws PreconditionError unless `cover` is a valid cover of g's vertices.
inline void validate_cover(const WeightedGraph& g, const Cover& cover) {
    if (cover.sets.empty()) throw PreconditionError("cover has no sets");
    std::vector<char> covered(static_cast<size_t>(g.vertex_count()), 0);
    const auto sets = normalized_sets(cover);
    for (size_t k = 0; k < sets.size(); ++k) {
        const auto& s = sets[k];
        if (s.empty())
            throw PreconditionError("cover set " + cover.set_label(static_cast<int>(k)) +
                                    " is empty");
        for (int v : s) {
            if (v < 0 || v >= g.vertex_count())
                throw PreconditionError("cover set " + cover.set_label(static_cast<int>(k)) +
                                        " has vertex index out of range");
            covered[static_cast<size_t>(v)] = 1;
        }
        if (!induces_connected_subgraph(g, s))
            throw PreconditionError("cover set " + cover.set_label(static_cast<int>(k)) +
                                    " does not induce a connected subgraph");
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (!covered[static_cast<size_t>(v)])
            throw PreconditionError("cover misses vertex " + std::to_string(v));
}

/// True when no vertex lies in three or more cover sets, i.e. every triple
/// intersection is empty.
inline bool triple_intersections_empty(const Cover& cover, int vertex_count) {
    std::vector<int> membership(static_cast<size_t>(vertex_count), 0);
    for (const auto& s : normalized_sets(cover))
        for (int v : s)
            if (v >= 0 && v < vertex_count && ++membership[static_cast<size_t>(v)] > 2)
                return false;
    return true;
}

} // namespace graphforms

#endif
