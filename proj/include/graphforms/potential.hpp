#ifndef GRAPHFORMS_POTENTIAL_HPP
#define GRAPHFORMS_POTENTIAL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <string>
#include <vector>

#include "graphforms/dirichlet.hpp"
#include "graphforms/errors.hpp"
#include "graphforms/linalg.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

/// Prescribed values on a set of boundary vertices, aligned index for index.
struct BoundaryData {
    std::vector<int> boundary;
    Eigen::VectorXd values;
};

namespace detail {
/// Boundary set sorted with values carried along; rejects duplicates.
inline std::pair<std::vector<int>, Eigen::VectorXd> sorted_boundary(const WeightedGraph& g,
                                                                    const std::vector<int>& boundary,
                                                                    const Eigen::VectorXd& values,
                                                                    const char* what) {
    if (boundary.empty()) throw PreconditionError(std::string(what) + ": boundary set is empty");
    if (values.size() != static_cast<Eigen::Index>(boundary.size()))
        throw PreconditionError(std::string(what) + ": boundary and value lengths differ");
    std::vector<int> order(boundary.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return boundary[static_cast<size_t>(a)] < boundary[static_cast<size_t>(b)]; });
    std::vector<int> b_sorted(boundary.size());
    Eigen::VectorXd v_sorted(values.size());
    for (size_t i = 0; i < order.size(); ++i) {
        b_sorted[i] = boundary[static_cast<size_t>(order[i])];
        v_sorted[static_cast<Eigen::Index>(i)] = values[order[i]];
        if (b_sorted[i] < 0 || b_sorted[i] >= g.vertex_count())
            throw PreconditionError(std::string(what) + ": boundary vertex out of range");
        if (i > 0 && b_sorted[i] == b_sorted[i - 1])
            throw PreconditionError(std::string(what) + ": duplicate boundary vertex " +
                                    std::to_string(b_sorted[i]));
    }
    return {std::move(b_sorted), std::move(v_sorted)};
}
} // namespace detail

/**
 * Unique function matching the boundary values and harmonic at every other
 * vertex.  Satisfies the maximum principle: values stay inside the closed
 * interval spanned by the boundary data.
 */
inline GraphFunction harmonic_extension(const WeightedGraph& g, const BoundaryData& data) {
    auto [boundary, values] =
        detail::sorted_boundary(g, data.boundary, data.values, "harmonic_extension");
    const int n = g.vertex_count();
    std::vector<int> local_of(static_cast<size_t>(n), -1);
    std::vector<int> interior;
    {
        std::vector<char> is_boundary(static_cast<size_t>(n), 0);
        for (int b : boundary) is_boundary[static_cast<size_t>(b)] = 1;
        for (int v = 0; v < n; ++v)
            if (!is_boundary[static_cast<size_t>(v)]) {
                local_of[static_cast<size_t>(v)] = static_cast<int>(interior.size());
                interior.push_back(v);
            }
    }
    GraphFunction f = GraphFunction::Zero(n);
    for (size_t i = 0; i < boundary.size(); ++i)
        f[boundary[i]] = values[static_cast<Eigen::Index>(i)];
    if (interior.empty()) return f;

    const int ni = static_cast<int>(interior.size());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
    for (const Edge& e : g.edges()) {
        const int a = local_of[static_cast<size_t>(e.tail)];
        const int b = local_of[static_cast<size_t>(e.head)];
        if (a >= 0) l(a, a) += e.conductance;
        if (b >= 0) l(b, b) += e.conductance;
        if (a >= 0 && b >= 0) {
            l(a, b) -= e.conductance;
            l(b, a) -= e.conductance;
        } else if (a >= 0) {
            rhs[a] += e.conductance * f[e.head];
        } else if (b >= 0) {
            rhs[b] += e.conductance * f[e.tail];
        }
    }
    const Eigen::VectorXd fi = solve_spd(l, rhs, "harmonic extension");
    for (int i = 0; i < ni; ++i) f[interior[static_cast<size_t>(i)]] = fi[i];
    return f;
}

/**
 * Capacity of a vertex set: the minimum of energy(u) + |u|^2_{L2(m)} over
 * functions with u = 1 on the set.  The unconstrained-off-the-set minimizer
 * automatically lies in [0,1], so the equality constraint gives the same
 * value as minimizing over u >= 1.  For the full vertex set this is the total
 * measure.
 */
inline double capacity(const WeightedGraph& g, const std::vector<int>& target_vertices) {
    std::vector<int> target = checked_vertex_set(g, target_vertices, "capacity");
    if (target.empty()) throw PreconditionError("capacity: target set is empty");

    const int n = g.vertex_count();
    GraphFunction u = GraphFunction::Zero(n);
    for (int t : target) u[t] = 1.0;

    std::vector<int> free_of(static_cast<size_t>(n), -1);
    std::vector<int> free_vertices;
    {
        std::vector<char> pinned(static_cast<size_t>(n), 0);
        for (int t : target) pinned[static_cast<size_t>(t)] = 1;
        for (int v = 0; v < n; ++v)
            if (!pinned[static_cast<size_t>(v)]) {
                free_of[static_cast<size_t>(v)] = static_cast<int>(free_vertices.size());
                free_vertices.push_back(v);
            }
    }
    if (!free_vertices.empty()) {
        const int nf = static_cast<int>(free_vertices.size());
        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nf, nf);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
        for (int i = 0; i < nf; ++i)
            k(i, i) += g.vertex_measure()[free_vertices[static_cast<size_t>(i)]];
        for (const Edge& e : g.edges()) {
            const int a = free_of[static_cast<size_t>(e.tail)];
            const int b = free_of[static_cast<size_t>(e.head)];
            if (a >= 0) k(a, a) += e.conductance;
            if (b >= 0) k(b, b) += e.conductance;
            if (a >= 0 && b >= 0) {
                k(a, b) -= e.conductance;
                k(b, a) -= e.conductance;
            } else if (a >= 0) {
                rhs[a] += e.conductance * u[e.head];
            } else if (b >= 0) {
                rhs[b] += e.conductance * u[e.tail];
            }
        }
        const Eigen::VectorXd uf = solve_spd(k, rhs, "capacity equilibrium");
        for (int i = 0; i < nf; ++i) u[free_vertices[static_cast<size_t>(i)]] = uf[i];
    }
    return energy(g, u) + u.dot(g.vertex_measure().asDiagonal() * u);
}

/// A vertex set whose removal disconnects a region, with its capacity.
struct DisconnectingSet {
    std::vector<int> vertices;
    double set_capacity = 0.0;
};

namespace detail {
inline int component_count(const WeightedGraph& g, const std::vector<char>& inside) {
    int components = 0;
    std::vector<char> visited(inside.size(), 0);
    for (int start = 0; start < static_cast<int>(inside.size()); ++start) {
        if (!inside[static_cast<size_t>(start)] || visited[static_cast<size_t>(start)]) continue;
        ++components;
        std::vector<int> stack{start};
        visited[static_cast<size_t>(start)] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [w, e] : g.incident(v)) {
                (void)e;
                if (inside[static_cast<size_t>(w)] && !visited[static_cast<size_t>(w)]) {
                    visited[static_cast<size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    return components;
}
} // namespace detail

/**
 * Inclusion-minimal vertex sets D inside a connected region whose removal
 * splits the rest of the region into at least two components, enumerated
 * exhaustively up to `max_size` and returned with their capacities.
 */
inline std::vector<DisconnectingSet> disconnecting_sets(const WeightedGraph& g,
                                                        const std::vector<int>& region_vertices,
                                                        int max_size = 3) {
    std::vector<int> region = checked_vertex_set(g, region_vertices, "disconnecting_sets");
    if (region.empty()) throw PreconditionError("disconnecting_sets: region is empty");
    if (!induces_connected_subgraph(g, region))
        throw PreconditionError("disconnecting_sets: region must induce a connected subgraph");
    if (max_size < 1) throw PreconditionError("disconnecting_sets: size bound must be positive");

    const int r = static_cast<int>(region.size());
    std::vector<DisconnectingSet> found;
    std::vector<int> combo;

    auto is_superset_of_found = [&](const std::vector<int>& d) {
        for (const DisconnectingSet& f : found)
            if (std::includes(d.begin(), d.end(), f.vertices.begin(), f.vertices.end()))
                return true;
        return false;
    };

    std::vector<char> inside(static_cast<size_t>(g.vertex_count()), 0);
    auto test_combo = [&](const std::vector<int>& picks) {
        std::vector<int> d;
        for (int p : picks) d.push_back(region[static_cast<size_t>(p)]);
        if (is_superset_of_found(d)) return;
        std::fill(inside.begin(), inside.end(), 0);
        for (int v : region) inside[static_cast<size_t>(v)] = 1;
        for (int v : d) inside[static_cast<size_t>(v)] = 0;
        if (detail::component_count(g, inside) >= 2)
            found.push_back({d, capacity(g, d)});
    };

    for (int size = 1; size <= std::min(max_size, r); ++size) {
        combo.assign(static_cast<size_t>(size), 0);
        for (int i = 0; i < size; ++i) combo[static_cast<size_t>(i)] = i;
        while (true) {
            test_combo(combo);
            int i = size - 1;
            while (i >= 0 && combo[static_cast<size_t>(i)] == r - size + i) --i;
            if (i < 0) break;
            ++combo[static_cast<size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                combo[static_cast<size_t>(j)] = combo[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return found;
}

/**
 * Orthonormal basis (in the energy + L2(m) inner product) of the functions
 * constant on each connected component of the radius-`radius` neighborhood of
 * `f_set` and unconstrained elsewhere.  Columns are ordered: one per
 * component (by smallest member), then one per outside vertex (ascending).
 */
inline Eigen::MatrixXd locally_constant_basis(const WeightedGraph& g,
                                              const std::vector<int>& f_set, int radius = 1) {
    std::vector<int> f_sorted = checked_vertex_set(g, f_set, "locally_constant_basis");
    if (f_sorted.empty()) throw PreconditionError("locally_constant_basis: set is empty");
    const std::vector<int> hull = neighborhood(g, f_sorted, radius);

    const int n = g.vertex_count();
    std::vector<char> in_hull(static_cast<size_t>(n), 0);
    for (int v : hull) in_hull[static_cast<size_t>(v)] = 1;

    // Connected components of the induced neighborhood.
    std::vector<int> component(static_cast<size_t>(n), -1);
    int components = 0;
    for (int start : hull) {
        if (component[static_cast<size_t>(start)] >= 0) continue;
        const int label = components++;
        std::vector<int> stack{start};
        component[static_cast<size_t>(start)] = label;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [w, e] : g.incident(v)) {
                (void)e;
                if (in_hull[static_cast<size_t>(w)] && component[static_cast<size_t>(w)] < 0) {
                    component[static_cast<size_t>(w)] = label;
                    stack.push_back(w);
                }
            }
        }
    }

    std::vector<GraphFunction> raw;
    for (int label = 0; label < components; ++label) {
        GraphFunction v = GraphFunction::Zero(n);
        for (int x = 0; x < n; ++x)
            if (component[static_cast<size_t>(x)] == label) v[x] = 1.0;
        raw.push_back(std::move(v));
    }
    for (int x = 0; x < n; ++x)
        if (!in_hull[static_cast<size_t>(x)]) {
            GraphFunction v = GraphFunction::Zero(n);
            v[x] = 1.0;
            raw.push_back(std::move(v));
        }

    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(raw.size()));
    for (size_t k = 0; k < raw.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = raw[k];

    // Orthonormalize against the energy + L2(m) Gram matrix.
    const Eigen::MatrixXd form =
        laplacian_matrix(g) + Eigen::MatrixXd(g.vertex_measure().asDiagonal());
    const Eigen::MatrixXd gram = basis.transpose() * form * basis;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("locally_constant_basis: Gram factorization failed");
    return llt.matrixU().solve<Eigen::OnTheRight>(basis);
}

/// Result of testing whether two locally constant subspaces span everything.
struct ReconstructionReport {
    int dim_first = 0;
    int dim_second = 0;
    int dim_sum = 0;
    int vertex_count = 0;
    bool full_span = false;
};

/**
 * Check that the locally constant subspaces of two separated sets together
 * span all functions on the graph.  Requires the radius-`radius`
 * neighborhoods of the two sets to be disjoint (the graph reading of
 * disjoint closed sets).
 */
inline ReconstructionReport reconstruction_check(const WeightedGraph& g,
                                                 const std::vector<int>& first_set,
                                                 const std::vector<int>& second_set,
                                                 int radius = 1) {
    const std::vector<int> f1 = checked_vertex_set(g, first_set, "reconstruction_check");
    const std::vector<int> f2 = checked_vertex_set(g, second_set, "reconstruction_check");
    if (f1.empty() || f2.empty())
        throw PreconditionError("reconstruction_check: sets must be nonempty");
    const std::vector<int> h1 = neighborhood(g, f1, radius);
    const std::vector<int> h2 = neighborhood(g, f2, radius);
    std::vector<int> overlap;
    std::set_intersection(h1.begin(), h1.end(), h2.begin(), h2.end(), std::back_inserter(overlap));
    if (!overlap.empty())
        throw PreconditionError("reconstruction_check: neighborhoods overlap at vertex " +
                                std::to_string(overlap.front()));

    const Eigen::MatrixXd b1 = locally_constant_basis(g, f1, radius);
    const Eigen::MatrixXd b2 = locally_constant_basis(g, f2, radius);
    Eigen::MatrixXd stacked(g.vertex_count(), b1.cols() + b2.cols());
    stacked << b1, b2;

    ReconstructionReport report;
    report.dim_first = static_cast<int>(b1.cols());
    report.dim_second = static_cast<int>(b2.cols());
    report.dim_sum = svd_rank(stacked);
    report.vertex_count = g.vertex_count();
    report.full_span = report.dim_sum == g.vertex_count();
    return report;
}

} // namespace graphforms

#endif
