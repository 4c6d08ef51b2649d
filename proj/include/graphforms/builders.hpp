#ifndef GRAPHFORMS_BUILDERS_HPP
#define GRAPHFORMS_BUILDERS_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphforms/cover.hpp"
#include "graphforms/errors.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

enum class GraphFamily { cycle, path, tree, sierpinski_gasket, metric_graph, ladder };

inline std::string family_name(GraphFamily family) {
    switch (family) {
        case GraphFamily::cycle: return "cycle";
        case GraphFamily::path: return "path";
        case GraphFamily::tree: return "tree";
        case GraphFamily::sierpinski_gasket: return "sierpinski_gasket";
        case GraphFamily::metric_graph: return "metric_graph";
        case GraphFamily::ladder: return "ladder";
    }
    throw PreconditionError("unknown graph family");
}

inline GraphFamily family_from_name(const std::string& name) {
    if (name == "cycle") return GraphFamily::cycle;
    if (name == "path") return GraphFamily::path;
    if (name == "tree") return GraphFamily::tree;
    if (name == "sierpinski_gasket") return GraphFamily::sierpinski_gasket;
    if (name == "metric_graph") return GraphFamily::metric_graph;
    if (name == "ladder") return GraphFamily::ladder;
    throw PreconditionError("unknown graph family '" + name + "'");
}

/// Edge of a metric graph carrying a resistance (reciprocal conductance).
struct MetricEdge {
    int tail = 0;
    int head = 0;
    double resistance = 1.0;
};

/**
 * Recipe for a standard test-bed graph.  `level_or_size` means: vertex count
 * for cycle/path/tree, rung count for ladder, approximation level for the
 * Sierpinski gasket; it is ignored for metric graphs, whose shape comes from
 * `metric_graph_edges` (optionally subdivided into `subdivision` equal
 * resistors per edge).
 */
struct BuilderSpec {
    GraphFamily family = GraphFamily::cycle;
    int level_or_size = 3;
    std::optional<double> renormalization;     // gasket conductance ratio, default 5/3
    int tree_arity = 2;
    std::vector<MetricEdge> metric_graph_edges;
    int subdivision = 1;
};

/// First Betti number |E| - |V| + 1 (the graph is connected by construction).
inline int first_betti(const WeightedGraph& g) {
    return g.edge_count() - g.vertex_count() + 1;
}

/**
 * Level-n Sierpinski gasket approximation graph together with its cell
 * structure.  Vertices are the 3^n cell corner points after identification;
 * each cell contributes its three corner-to-corner edges.  All conductances
 * equal renormalization^level so that tracing level n+1 onto the level-n
 * vertices reproduces the level-n network.
 */
struct GasketGraph {
    WeightedGraph graph;
    int level = 0;
    std::vector<std::array<int, 3>> cells;         // vertex triple per cell
    std::vector<std::array<long, 2>> coordinates;  // dyadic coordinates over 2^level
};

inline GasketGraph build_gasket(int level, double renormalization = 5.0 / 3.0) {
    if (level < 0) throw PreconditionError("gasket level must be nonnegative");
    if (level > 12) throw PreconditionError("gasket level too large");
    if (!(renormalization > 0.0))
        throw PreconditionError("gasket renormalization must be strictly positive");

    // Corners of the unit cell in integer coordinates.
    static constexpr std::array<std::array<long, 2>, 3> kCorner = {{{0, 0}, {1, 0}, {0, 1}}};

    const long cell_count = 1;
    long cells_total = 1;
    for (int i = 0; i < level; ++i) cells_total *= 3;
    (void)cell_count;

    std::map<std::array<long, 2>, int> index_of;
    std::vector<std::array<long, 2>> coordinates;
    std::vector<std::array<int, 3>> cells;
    std::vector<Edge> edges;

    double conductance = 1.0;
    for (int i = 0; i < level; ++i) conductance *= renormalization;

    // Enumerate cells as words over {0,1,2} in lexicographic order.  The cell
    // for word w is the image of the unit cell under the maps x -> (x+q_d)/2,
    // applied left to right, so its corner i sits at
    //   sum_k q_{w_k} 2^{level-k} ... + q_i  (all over denominator 2^level).
    std::vector<int> word(static_cast<size_t>(level), 0);
    for (long c = 0; c < cells_total; ++c) {
        std::array<long, 2> base = {0, 0};
        long scale = 1;
        for (int k = level - 1; k >= 0; --k) {
            base[0] += kCorner[static_cast<size_t>(word[static_cast<size_t>(k)])][0] * scale;
            base[1] += kCorner[static_cast<size_t>(word[static_cast<size_t>(k)])][1] * scale;
            scale *= 2;
        }
        std::array<int, 3> cell{};
        for (int i = 0; i < 3; ++i) {
            std::array<long, 2> p = {base[0] + kCorner[static_cast<size_t>(i)][0],
                                     base[1] + kCorner[static_cast<size_t>(i)][1]};
            auto [it, inserted] = index_of.try_emplace(p, static_cast<int>(coordinates.size()));
            if (inserted) coordinates.push_back(p);
            cell[static_cast<size_t>(i)] = it->second;
        }
        cells.push_back(cell);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                int a = cell[static_cast<size_t>(i)], b = cell[static_cast<size_t>(j)];
                edges.push_back({std::min(a, b), std::max(a, b), conductance});
            }
        // next word
        for (int k = level - 1; k >= 0; --k) {
            if (++word[static_cast<size_t>(k)] < 3) break;
            word[static_cast<size_t>(k)] = 0;
        }
    }

    WeightedGraph graph(static_cast<int>(coordinates.size()), std::move(edges));
    return GasketGraph{std::move(graph), level, std::move(cells), std::move(coordinates)};
}

/// Canonical good cover of a gasket: one set per cell.  Distinct cells share
/// at most one vertex and every vertex lies in at most two cells, so all
/// triple intersections are empty.
inline Cover gasket_cell_cover(const GasketGraph& gg) {
    Cover cover;
    for (size_t k = 0; k < gg.cells.size(); ++k) {
        const auto& cell = gg.cells[k];
        std::vector<int> s(cell.begin(), cell.end());
        std::sort(s.begin(), s.end());
        cover.sets.push_back(std::move(s));
        cover.labels.push_back("cell" + std::to_string(k));
    }
    return cover;
}

/// Vertices of the level-(n-1) approximation inside a level-n gasket: the
/// points with even dyadic coordinates.  Ascending, matching the labeling
/// that build_gasket(level-1) assigns.
inline std::vector<int> gasket_coarse_vertices(const GasketGraph& gg) {
    if (gg.level == 0) throw PreconditionError("level-0 gasket has no coarser approximation");
    std::vector<int> coarse;
    for (size_t v = 0; v < gg.coordinates.size(); ++v)
        if (gg.coordinates[v][0] % 2 == 0 && gg.coordinates[v][1] % 2 == 0)
            coarse.push_back(static_cast<int>(v));
    return coarse;
}

namespace detail {

inline WeightedGraph build_cycle(int size) {
    if (size < 3) throw PreconditionError("cycle needs at least 3 vertices");
    std::vector<Edge> edges;
    for (int i = 0; i < size; ++i) edges.push_back({i, (i + 1) % size, 1.0});
    return WeightedGraph(size, std::move(edges));
}

inline WeightedGraph build_path(int size) {
    if (size < 1) throw PreconditionError("path needs at least 1 vertex");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < size; ++i) edges.push_back({i, i + 1, 1.0});
    return WeightedGraph(size, std::move(edges));
}

inline WeightedGraph build_tree(int size, int arity) {
    if (size < 1) throw PreconditionError("tree needs at least 1 vertex");
    if (arity < 1) throw PreconditionError("tree arity must be positive");
    std::vector<Edge> edges;
    for (int i = 1; i < size; ++i) edges.push_back({(i - 1) / arity, i, 1.0});
    return WeightedGraph(size, std::move(edges));
}

inline WeightedGraph build_ladder(int rungs) {
    if (rungs < 1) throw PreconditionError("ladder needs at least 1 rung");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < rungs; ++i) {
        edges.push_back({i, i + 1, 1.0});
        edges.push_back({rungs + i, rungs + i + 1, 1.0});
    }
    for (int i = 0; i < rungs; ++i) edges.push_back({i, rungs + i, 1.0});
    return WeightedGraph(2 * rungs, std::move(edges));
}

inline WeightedGraph build_metric(const std::vector<MetricEdge>& metric_edges, int subdivision) {
    if (metric_edges.empty()) throw PreconditionError("metric graph needs at least one edge");
    if (subdivision < 1) throw PreconditionError("subdivision count must be positive");
    int named = 0;
    for (const MetricEdge& me : metric_edges) {
        if (me.tail < 0 || me.head < 0)
            throw PreconditionError("metric edge endpoint out of range");
        if (!(me.resistance > 0.0))
            throw PreconditionError("metric edge resistance must be strictly positive");
        named = std::max({named, me.tail + 1, me.head + 1});
    }
    std::vector<Edge> edges;
    int next = named;
    for (const MetricEdge& me : metric_edges) {
        // A resistance r split into s equal segments of conductance s/r each.
        const double conductance = static_cast<double>(subdivision) / me.resistance;
        int previous = me.tail;
        for (int k = 1; k < subdivision; ++k) {
            edges.push_back({previous, next, conductance});
            previous = next++;
        }
        edges.push_back({previous, me.head, conductance});
    }
    return WeightedGraph(next, std::move(edges));
}

} // namespace detail

namespace detail {
/// Scale every conductance by a common factor.
inline WeightedGraph scale_conductances(WeightedGraph g, double factor) {
    if (factor == 1.0) return g;
    if (factor <= 0.0) throw PreconditionError("build: conductance factor must be positive");
    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges) e.conductance *= factor;
    return WeightedGraph(g.vertex_count(), std::move(edges), g.vertex_measure());
}
} // namespace detail

inline WeightedGraph build(const BuilderSpec& spec) {
    // For the gasket the factor acts per level; elsewhere it scales uniformly.
    const double factor = spec.renormalization.value_or(1.0);
    switch (spec.family) {
        case GraphFamily::cycle:
            return detail::scale_conductances(detail::build_cycle(spec.level_or_size), factor);
        case GraphFamily::path:
            return detail::scale_conductances(detail::build_path(spec.level_or_size), factor);
        case GraphFamily::tree:
            return detail::scale_conductances(
                detail::build_tree(spec.level_or_size, spec.tree_arity), factor);
        case GraphFamily::sierpinski_gasket:
            return build_gasket(spec.level_or_size, spec.renormalization.value_or(5.0 / 3.0)).graph;
        case GraphFamily::metric_graph:
            return detail::scale_conductances(
                detail::build_metric(spec.metric_graph_edges, spec.subdivision), factor);
        case GraphFamily::ladder:
            return detail::scale_conductances(detail::build_ladder(spec.level_or_size), factor);
    }
    throw PreconditionError("unknown graph family");
}

} // namespace graphforms

#endif
