#ifndef GRAPHFORMS_DIRICHLET_HPP
#define GRAPHFORMS_DIRICHLET_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "graphforms/errors.hpp"
#include "graphforms/linalg.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

namespace detail {
inline void check_function(const WeightedGraph& g, const GraphFunction& f, const char* what) {
    if (f.size() != g.vertex_count())
        throw PreconditionError(std::string(what) + ": function length " +
                                std::to_string(f.size()) + " does not match vertex count " +
                                std::to_string(g.vertex_count()));
}
} // namespace detail

/**
 * Mutual Dirichlet energy: sum over edges of conductance times the product of
 * the two functions' increments along the edge.  Symmetric, bilinear, and
 * zero whenever either argument is constant.
 */
inline double energy(const WeightedGraph& g, const GraphFunction& f, const GraphFunction& h) {
    detail::check_function(g, f, "energy");
    detail::check_function(g, h, "energy");
    double total = 0.0;
    for (const Edge& e : g.edges())
        total += e.conductance * (f[e.head] - f[e.tail]) * (h[e.head] - h[e.tail]);
    return total;
}

inline double energy(const WeightedGraph& g, const GraphFunction& f) { return energy(g, f, f); }

/**
 * Mutual energy measure: each edge's energy contribution is split half-half
 * between its endpoints.  The atoms sum to energy(g, f, h), and the splitting
 * makes the product-rule identity
 *   2 * sum_x phi(x) Gamma(f,h)({x}) = E(phi*f, h) + E(phi*h, f) - E(f*h, phi)
 * hold for every vertex function phi, not just indicators.
 */
inline VertexMeasure energy_measure(const WeightedGraph& g, const GraphFunction& f,
                                    const GraphFunction& h) {
    detail::check_function(g, f, "energy_measure");
    detail::check_function(g, h, "energy_measure");
    VertexMeasure atoms = VertexMeasure::Zero(g.vertex_count());
    for (const Edge& e : g.edges()) {
        const double contribution =
            0.5 * e.conductance * (f[e.head] - f[e.tail]) * (h[e.head] - h[e.tail]);
        atoms[e.tail] += contribution;
        atoms[e.head] += contribution;
    }
    return atoms;
}

inline VertexMeasure energy_measure(const WeightedGraph& g, const GraphFunction& f) {
    return energy_measure(g, f, f);
}

/**
 * Generator of the form in L2 of the vertex measure:
 *   (A f)(x) = -(1/m(x)) * sum_{y ~ x} c_xy (f(x) - f(y)),
 * so that <f, A h>_{L2(m)} = -energy(f, h).
 */
inline GraphFunction generator(const WeightedGraph& g, const GraphFunction& f) {
    detail::check_function(g, f, "generator");
    GraphFunction result = GraphFunction::Zero(g.vertex_count());
    for (const Edge& e : g.edges()) {
        const double flow = e.conductance * (f[e.head] - f[e.tail]);
        result[e.tail] += flow;
        result[e.head] -= flow;
    }
    return result.array() / g.vertex_measure().array();
}

/// Weighted graph Laplacian L with (L f)(x) = sum_{y ~ x} c_xy (f(x) - f(y)).
/// Positive semidefinite; A = -M^{-1} L for M = diag(vertex measure).
inline Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(g.vertex_count(), g.vertex_count());
    for (const Edge& e : g.edges()) {
        l(e.tail, e.tail) += e.conductance;
        l(e.head, e.head) += e.conductance;
        l(e.tail, e.head) -= e.conductance;
        l(e.head, e.tail) -= e.conductance;
    }
    return l;
}

/// Smallest nonzero eigenvalue of -A, i.e. of the pencil L x = lambda M x.
/// Strictly positive exactly because the graph is connected.
inline double spectral_gap(const WeightedGraph& g) {
    if (g.vertex_count() < 2)
        throw PreconditionError("spectral_gap needs at least two vertices");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        laplacian_matrix(g), Eigen::MatrixXd(g.vertex_measure().asDiagonal()));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_gap: eigensolver failed");
    return solver.eigenvalues()[1];
}

/**
 * Trace of the energy form onto a subset of vertices: Schur complement of the
 * Laplacian onto `coarse_vertices`.  The result is the weighted graph whose
 * energy agrees with the original after harmonic extension to the eliminated
 * vertices.  Coarse vertices are renumbered 0..k-1 in ascending original
 * order; edges come out in lexicographic order with tail < head; coarse
 * vertices keep their original measures.
 */
inline WeightedGraph schur_trace(const WeightedGraph& g, std::vector<int> coarse_vertices) {
    std::vector<int> coarse = checked_vertex_set(g, std::move(coarse_vertices), "schur_trace");
    if (coarse.empty()) throw PreconditionError("schur_trace: coarse vertex set is empty");

    const Eigen::MatrixXd s = schur_complement_onto(laplacian_matrix(g), coarse);
    const int k = static_cast<int>(coarse.size());

    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            const double conductance = -s(i, j);
            // Entries that are zero in exact arithmetic surface as roundoff
            // noise; the diagonal bounds every genuine conductance from above.
            const double floor = 1e-12 * std::min(s(i, i), s(j, j));
            if (conductance > floor) edges.push_back({i, j, conductance});
        }

    VertexMeasure measure(k);
    for (int i = 0; i < k; ++i) measure[i] = g.vertex_measure()[coarse[static_cast<size_t>(i)]];
    return WeightedGraph(k, std::move(edges), std::move(measure));
}

} // namespace graphforms

#endif
