#ifndef GRAPHFORMS_CECH_HPP
#define GRAPHFORMS_CECH_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "graphforms/cover.hpp"
#include "graphforms/errors.hpp"
#include "graphforms/linalg.hpp"
#include "graphforms/one_forms.hpp"
#include "graphforms/potential.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

/**
 * Nerve of a cover, recorded up to 2-simplices: one vertex per cover set, a
 * 1-simplex per nonempty pairwise intersection and a 2-simplex per nonempty
 * triple intersection.  Simplices are stored as ascending index tuples in
 * lexicographic order; the ascending order is the positive orientation.
 */
struct Nerve {
    int label_count = 0;
    std::vector<std::array<int, 2>> one_simplices;
    std::vector<std::array<int, 3>> two_simplices;

    int simplex_count() const {
        return label_count + static_cast<int>(one_simplices.size()) +
               static_cast<int>(two_simplices.size());
    }

    /// Index of the 1-simplex {a,b} with a < b, or -1.
    int pair_index(int a, int b) const {
        const std::array<int, 2> key{a, b};
        auto it = std::lower_bound(one_simplices.begin(), one_simplices.end(), key);
        if (it == one_simplices.end() || *it != key) return -1;
        return static_cast<int>(it - one_simplices.begin());
    }
};

inline Nerve nerve(const WeightedGraph& g, const Cover& cover) {
    validate_cover(g, cover);
    const auto sets = normalized_sets(cover);
    const int k = static_cast<int>(sets.size());

    Nerve n;
    n.label_count = k;
    std::vector<std::vector<int>> pair_cache(static_cast<size_t>(k) * static_cast<size_t>(k));
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            std::vector<int> meet;
            std::set_intersection(sets[static_cast<size_t>(a)].begin(), sets[static_cast<size_t>(a)].end(),
                                  sets[static_cast<size_t>(b)].begin(), sets[static_cast<size_t>(b)].end(),
                                  std::back_inserter(meet));
            if (!meet.empty()) {
                n.one_simplices.push_back({a, b});
                pair_cache[static_cast<size_t>(a) * static_cast<size_t>(k) + static_cast<size_t>(b)] =
                    std::move(meet);
            }
        }
    for (const auto& [a, b] : n.one_simplices)
        for (int c = b + 1; c < k; ++c) {
            if (n.pair_index(b, c) < 0 || n.pair_index(a, c) < 0) continue;
            const auto& meet_ab =
                pair_cache[static_cast<size_t>(a) * static_cast<size_t>(k) + static_cast<size_t>(b)];
            std::vector<int> meet;
            std::set_intersection(meet_ab.begin(), meet_ab.end(), sets[static_cast<size_t>(c)].begin(),
                                  sets[static_cast<size_t>(c)].end(), std::back_inserter(meet));
            if (!meet.empty()) n.two_simplices.push_back({a, b, c});
        }
    return n;
}

/// Alternating cochain on the nerve, degree 0, 1 or 2; values are indexed by
/// the nerve's canonical simplex order.
struct Cochain {
    int degree = 0;
    Eigen::VectorXd values;
};

namespace detail {
inline void check_cochain(const Nerve& n, const Cochain& c, const char* what) {
    Eigen::Index expected = 0;
    switch (c.degree) {
        case 0: expected = n.label_count; break;
        case 1: expected = static_cast<Eigen::Index>(n.one_simplices.size()); break;
        case 2: expected = static_cast<Eigen::Index>(n.two_simplices.size()); break;
        default: throw PreconditionError(std::string(what) + ": cochain degree must be 0, 1 or 2");
    }
    if (c.values.size() != expected)
        throw PreconditionError(std::string(what) + ": cochain length does not match the nerve");
}
} // namespace detail

/// Evaluate a degree-1 cochain on an ordered label pair, honoring alternation:
/// value(b,a) = -value(a,b), value on a degenerate pair is 0.
inline double evaluate_pair(const Nerve& n, const Cochain& c, int a, int b) {
    detail::check_cochain(n, c, "evaluate_pair");
    if (c.degree != 1) throw PreconditionError("evaluate_pair: cochain degree must be 1");
    if (a == b) return 0.0;
    const double sign = a < b ? 1.0 : -1.0;
    const int idx = n.pair_index(std::min(a, b), std::max(a, b));
    if (idx < 0) throw PreconditionError("evaluate_pair: labels do not span a 1-simplex");
    return sign * c.values[idx];
}

/**
 * Coboundary operator.  Degree 0 to 1: (df)(ab) = f(b) - f(a).  Degree 1 to
 * 2: (dc)(abc) = c(bc) - c(ac) + c(ab).  The composite of the two vanishes
 * identically; cochains of degree 2 have no coboundary here since the nerve
 * is recorded only up to 2-simplices.
 */
inline Cochain coboundary(const Nerve& n, const Cochain& c) {
    detail::check_cochain(n, c, "coboundary");
    if (c.degree == 0) {
        Cochain out{1, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n.one_simplices.size()))};
        for (size_t s = 0; s < n.one_simplices.size(); ++s)
            out.values[static_cast<Eigen::Index>(s)] =
                c.values[n.one_simplices[s][1]] - c.values[n.one_simplices[s][0]];
        return out;
    }
    if (c.degree == 1) {
        Cochain out{2, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n.two_simplices.size()))};
        for (size_t s = 0; s < n.two_simplices.size(); ++s) {
            const auto& [a, b, cc] = n.two_simplices[s];
            out.values[static_cast<Eigen::Index>(s)] = c.values[n.pair_index(b, cc)] -
                                                       c.values[n.pair_index(a, cc)] +
                                                       c.values[n.pair_index(a, b)];
        }
        return out;
    }
    throw PreconditionError("coboundary: degree-2 cochains have no recorded coboundary");
}

/// Matrix of the degree-0 coboundary (|1-simplices| x |labels|).
inline Eigen::MatrixXd coboundary0_matrix(const Nerve& n) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n.one_simplices.size()),
                                              n.label_count);
    for (size_t s = 0; s < n.one_simplices.size(); ++s) {
        d(static_cast<Eigen::Index>(s), n.one_simplices[s][0]) = -1.0;
        d(static_cast<Eigen::Index>(s), n.one_simplices[s][1]) = 1.0;
    }
    return d;
}

/// Matrix of the degree-1 coboundary (|2-simplices| x |1-simplices|).
inline Eigen::MatrixXd coboundary1_matrix(const Nerve& n) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n.two_simplices.size()),
                                              static_cast<Eigen::Index>(n.one_simplices.size()));
    for (size_t s = 0; s < n.two_simplices.size(); ++s) {
        const auto& [a, b, c] = n.two_simplices[s];
        d(static_cast<Eigen::Index>(s), n.pair_index(b, c)) += 1.0;
        d(static_cast<Eigen::Index>(s), n.pair_index(a, c)) -= 1.0;
        d(static_cast<Eigen::Index>(s), n.pair_index(a, b)) += 1.0;
    }
    return d;
}

namespace detail {
/// Rank with the numeric threshold, cross-checked by exact rational
/// elimination on small integer matrices.
inline int checked_rank(const Eigen::MatrixXd& a, bool cross_check, double rank_cutoff) {
    const int numeric = svd_rank(a, rank_cutoff);
    if (cross_check) {
        Eigen::MatrixXi exact(a.rows(), a.cols());
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            for (Eigen::Index c = 0; c < a.cols(); ++c)
                exact(r, c) = static_cast<int>(std::lround(a(r, c)));
        if (exact_integer_rank(exact) != numeric)
            throw std::runtime_error("cech rank: numeric and exact ranks disagree");
    }
    return numeric;
}
} // namespace detail

/// Dimension of the first Cech cohomology of the nerve:
/// dim ker(d1) - dim im(d0).  Ranks use the relative singular value cutoff;
/// for nerves below 64 simplices they are verified against exact rational
/// elimination.
inline int h1_dimension(const Nerve& n, double rank_cutoff = 1e-10) {
    const bool cross_check = n.simplex_count() < 64;
    const int rank_d1 = detail::checked_rank(coboundary1_matrix(n), cross_check, rank_cutoff);
    const int rank_d0 = detail::checked_rank(coboundary0_matrix(n), cross_check, rank_cutoff);
    const int cocycles = static_cast<int>(n.one_simplices.size()) - rank_d1;
    return cocycles - rank_d0;
}

/**
 * Refinement map from a finer cover into a coarser one: each fine set is sent
 * to the smallest-index coarse set containing it.  Returns nothing when some
 * fine set fits in no coarse set.
 */
inline std::optional<std::vector<int>> refinement_map(const Cover& coarse, const Cover& fine) {
    const auto coarse_sets = normalized_sets(coarse);
    const auto fine_sets = normalized_sets(fine);
    std::vector<int> pi;
    for (const auto& v : fine_sets) {
        int found = -1;
        for (size_t a = 0; a < coarse_sets.size(); ++a)
            if (std::includes(coarse_sets[a].begin(), coarse_sets[a].end(), v.begin(), v.end())) {
                found = static_cast<int>(a);
                break;
            }
        if (found < 0) return std::nullopt;
        pi.push_back(found);
    }
    return pi;
}

/// Map induced on first cohomology by a refinement, with rank bookkeeping.
struct InducedH1Map {
    Eigen::MatrixXd cochain_map;  // pullback on 1-cochains, fine x coarse
    int coarse_h1 = 0;
    int fine_h1 = 0;
    int rank = 0;                 // of the induced map on cohomology classes
    bool well_defined = false;    // coboundaries land in coboundaries
    bool injective = false;
};

/**
 * Compute the map on first cohomology induced by a refinement map pi (from
 * fine-cover labels to coarse-cover labels).  The pullback of a 1-cochain c
 * is (pi c)(b0 b1) = c(pi(b0) pi(b1)); the refinement property guarantees the
 * needed coarse simplices exist.  Injectivity of the induced map is what
 * makes cohomology classes survive refinement.
 */
inline InducedH1Map induced_h1_map(const WeightedGraph& g, const Cover& coarse, const Cover& fine,
                                   const std::vector<int>& pi) {
    const auto fine_sets = normalized_sets(fine);
    if (pi.size() != fine_sets.size())
        throw PreconditionError("induced_h1_map: refinement map length mismatch");
    {
        const auto coarse_sets = normalized_sets(coarse);
        for (size_t b = 0; b < fine_sets.size(); ++b) {
            if (pi[b] < 0 || pi[b] >= static_cast<int>(coarse_sets.size()))
                throw PreconditionError("induced_h1_map: refinement map label out of range");
            if (!std::includes(coarse_sets[static_cast<size_t>(pi[b])].begin(),
                               coarse_sets[static_cast<size_t>(pi[b])].end(), fine_sets[b].begin(),
                               fine_sets[b].end()))
                throw PreconditionError("induced_h1_map: map is not a refinement (set " +
                                        std::to_string(b) + ")");
        }
    }
    const Nerve nu = nerve(g, coarse);
    const Nerve nv = nerve(g, fine);

    InducedH1Map out;
    out.cochain_map = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nv.one_simplices.size()),
                                            static_cast<Eigen::Index>(nu.one_simplices.size()));
    for (size_t s = 0; s < nv.one_simplices.size(); ++s) {
        const int a = pi[static_cast<size_t>(nv.one_simplices[s][0])];
        const int b = pi[static_cast<size_t>(nv.one_simplices[s][1])];
        if (a == b) continue;
        const int idx = nu.pair_index(std::min(a, b), std::max(a, b));
        if (idx < 0)
            throw PreconditionError("induced_h1_map: image simplex missing from coarse nerve");
        out.cochain_map(static_cast<Eigen::Index>(s), idx) = a < b ? 1.0 : -1.0;
    }

    const Eigen::MatrixXd d0_u = coboundary0_matrix(nu);
    const Eigen::MatrixXd d0_v = coboundary0_matrix(nv);
    const Eigen::MatrixXd cocycles_u = svd_nullspace(coboundary1_matrix(nu));
    out.coarse_h1 = static_cast<int>(cocycles_u.cols()) - svd_rank(d0_u);
    out.fine_h1 = static_cast<int>(svd_nullspace(coboundary1_matrix(nv)).cols()) - svd_rank(d0_v);

    const int rank_b_v = svd_rank(d0_v);
    {
        Eigen::MatrixXd pushed(d0_v.rows(), cocycles_u.cols() + d0_v.cols());
        pushed << out.cochain_map * cocycles_u, d0_v;
        out.rank = svd_rank(pushed) - rank_b_v;
    }
    {
        Eigen::MatrixXd pushed(d0_v.rows(), d0_u.cols() + d0_v.cols());
        pushed << out.cochain_map * d0_u, d0_v;
        out.well_defined = svd_rank(pushed) == rank_b_v;
    }
    out.injective = out.rank == out.coarse_h1;
    return out;
}

/// A constructed cover together with honest validity flags.
struct GoodCover {
    Cover cover;
    bool triple_intersection_free = false;
    std::string method;
};

namespace detail {
/// Vertices of a path or cycle in walk order.
inline std::vector<int> walk_order(const WeightedGraph& g, bool is_cycle) {
    const int n = g.vertex_count();
    std::vector<int> order;
    int start = 0;
    if (!is_cycle) {
        for (int v = 0; v < n; ++v)
            if (g.degree(v) == 1) {
                start = v;
                break;
            }
    }
    std::vector<char> seen(static_cast<size_t>(n), 0);
    int v = start;
    seen[static_cast<size_t>(v)] = 1;
    order.push_back(v);
    while (static_cast<int>(order.size()) < n) {
        int next = -1;
        for (auto [w, e] : g.incident(v)) {
            (void)e;
            if (!seen[static_cast<size_t>(w)]) {
                next = w;
                break;
            }
        }
        if (next < 0) break;
        seen[static_cast<size_t>(next)] = 1;
        order.push_back(next);
        v = next;
    }
    return order;
}
} // namespace detail

/**
 * Construct a cover with connected sets of at most `max_set_size` vertices,
 * with empty triple intersections where the construction can achieve them.
 * Paths and cycles get overlapping arcs along the walk order (a cycle always
 * gets at least three arcs, shrinking the arcs if needed, so its nerve can
 * close up).  Any other graph gets one two-vertex set per edge, which keeps
 * every cycle of the graph visible in the nerve; triple intersections then
 * appear exactly at vertices of degree three or more and are reported as
 * such.  The returned flags are re-checked, never assumed.
 */
inline GoodCover good_cover(const WeightedGraph& g, int max_set_size = 3) {
    if (max_set_size < 2) throw PreconditionError("good_cover: max_set_size must be at least 2");
    GoodCover result;
    const int n = g.vertex_count();

    int max_degree = 0;
    for (int v = 0; v < n; ++v) max_degree = std::max(max_degree, g.degree(v));

    if (n == 1) {
        result.cover.sets = {{0}};
        result.method = "single";
    } else if (max_degree <= 2) {
        const bool is_cycle = g.edge_count() == n;
        const std::vector<int> order = detail::walk_order(g, is_cycle);
        if (is_cycle) {
            int a = std::min(max_set_size, n - 1);
            while (a > 2 && (n + a - 2) / (a - 1) < 3) --a;
            const int step = a - 1;
            for (int startpos = 0; startpos < n; startpos += step) {
                std::vector<int> arc;
                for (int i = 0; i <= std::min(step, n - startpos); ++i)
                    arc.push_back(order[static_cast<size_t>((startpos + i) % n)]);
                result.cover.sets.push_back(std::move(arc));
            }
            result.method = "arcs";
        } else {
            const int a = std::min(max_set_size, n);
            const int step = a - 1;
            for (int startpos = 0; startpos < n - 1 || startpos == 0; startpos += step) {
                std::vector<int> arc;
                for (int i = 0; i <= std::min(step, n - 1 - startpos); ++i)
                    arc.push_back(order[static_cast<size_t>(startpos + i)]);
                result.cover.sets.push_back(std::move(arc));
                if (startpos + step >= n - 1) break;
            }
            result.method = "arcs";
        }
    } else {
        for (const Edge& e : g.edges())
            result.cover.sets.push_back({std::min(e.tail, e.head), std::max(e.tail, e.head)});
        result.method = "edge_cover";
    }

    validate_cover(g, result.cover);
    result.triple_intersection_free = triple_intersections_empty(result.cover, n);
    return result;
}

/// Side-by-side report of harmonic and Cech first-cohomology nontriviality.
struct CorrespondenceReport {
    int harmonic_dimension = 0;  // dim ker d* computed by rank, equals |E|-|V|+1
    int cech_h1 = 0;
    bool harmonic_nontrivial = false;
    bool cech_nontrivial = false;
    bool agree = false;
    bool cover_triple_free = false;
    bool separating_sets_positive = true;  // capacities of small disconnecting sets
    double min_separating_capacity = 0.0;  // 0 when none were found
    std::string note;
};

/**
 * Compare nontriviality of the divergence-free 1-form space against the first
 * Cech cohomology of the given cover's nerve.  A single cover can only
 * certify nontriviality, never refute it, so disagreement is reported with a
 * note instead of an error.  The capacity hypothesis behind the
 * correspondence (separating sets have positive capacity) holds on any
 * weighted graph; the report states it by measuring the small disconnecting
 * sets it can find.
 */
inline CorrespondenceReport correspondence_check(const WeightedGraph& g, const Cover& cover) {
    CorrespondenceReport report;
    report.harmonic_dimension = g.edge_count() - svd_rank(codifferential_matrix(g));
    report.cech_h1 = h1_dimension(nerve(g, cover));
    report.harmonic_nontrivial = report.harmonic_dimension > 0;
    report.cech_nontrivial = report.cech_h1 > 0;
    report.agree = report.harmonic_nontrivial == report.cech_nontrivial;
    report.cover_triple_free = triple_intersections_empty(cover, g.vertex_count());

    std::vector<int> all(static_cast<size_t>(g.vertex_count()));
    for (int v = 0; v < g.vertex_count(); ++v) all[static_cast<size_t>(v)] = v;
    const auto separators = disconnecting_sets(g, all, 3);
    if (separators.empty()) {
        report.min_separating_capacity = 0.0;
        report.note = "no disconnecting sets of size <= 3";
    } else {
        double min_cap = separators.front().set_capacity;
        for (const auto& d : separators) min_cap = std::min(min_cap, d.set_capacity);
        report.min_separating_capacity = min_cap;
        report.separating_sets_positive = min_cap > 0.0;
    }
    if (!report.agree)
        report.note = (report.note.empty() ? std::string() : report.note + "; ") +
                      "a single cover certifies nontriviality but cannot refute it; refine the "
                      "cover to expose cycles";
    return report;
}

} // namespace graphforms

#endif
