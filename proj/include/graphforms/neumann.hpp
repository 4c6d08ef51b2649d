#ifndef GRAPHFORMS_NEUMANN_HPP
#define GRAPHFORMS_NEUMANN_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "graphforms/dirichlet.hpp"
#include "graphforms/errors.hpp"
#include "graphforms/linalg.hpp"
#include "graphforms/potential.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

/// Prescribed outward fluxes on a set of boundary vertices, aligned index for
/// index.  Solvable exactly when the fluxes sum to zero.
struct NeumannData {
    std::vector<int> boundary;
    Eigen::VectorXd fluxes;
};

/**
 * Green operator for the boundary set B: the unique f with f = 0 on B and
 * -(A f) = source at every vertex outside B.  Entries of `source` on B are
 * ignored.  Self-adjoint and positive semidefinite on functions supported
 * outside B, in the L2(m) pairing.
 */
inline GraphFunction green_operator(const WeightedGraph& g, const std::vector<int>& boundary,
                                    const GraphFunction& source) {
    detail::check_function(g, source, "green_operator");
    std::vector<int> b = checked_vertex_set(g, boundary, "green_operator");
    if (b.empty()) throw PreconditionError("green_operator: boundary set is empty");

    const int n = g.vertex_count();
    std::vector<int> local_of(static_cast<size_t>(n), -1);
    std::vector<int> interior;
    {
        std::vector<char> is_boundary(static_cast<size_t>(n), 0);
        for (int v : b) is_boundary[static_cast<size_t>(v)] = 1;
        for (int v = 0; v < n; ++v)
            if (!is_boundary[static_cast<size_t>(v)]) {
                local_of[static_cast<size_t>(v)] = static_cast<int>(interior.size());
                interior.push_back(v);
            }
    }
    GraphFunction f = GraphFunction::Zero(n);
    if (interior.empty()) return f;

    const int ni = static_cast<int>(interior.size());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::VectorXd rhs(ni);
    for (int i = 0; i < ni; ++i) {
        const int v = interior[static_cast<size_t>(i)];
        rhs[i] = g.vertex_measure()[v] * source[v];
    }
    for (const Edge& e : g.edges()) {
        const int a = local_of[static_cast<size_t>(e.tail)];
        const int c = local_of[static_cast<size_t>(e.head)];
        if (a >= 0) l(a, a) += e.conductance;
        if (c >= 0) l(c, c) += e.conductance;
        if (a >= 0 && c >= 0) {
            l(a, c) -= e.conductance;
            l(c, a) -= e.conductance;
        }
    }
    const Eigen::VectorXd fi = solve_spd(l, rhs, "green operator");
    for (int i = 0; i < ni; ++i) f[interior[static_cast<size_t>(i)]] = fi[i];
    return f;
}

/// Discrete normal derivative at a vertex: (df)_p = sum_{y ~ p} c_py (f(p) - f(y)).
/// The sign makes Gauss-Green read: fluxes of a function harmonic outside B
/// sum to zero over B.
inline double neumann_derivative(const WeightedGraph& g, const GraphFunction& f, int p) {
    detail::check_function(g, f, "neumann_derivative");
    if (p < 0 || p >= g.vertex_count())
        throw PreconditionError("neumann_derivative: vertex out of range");
    double net = 0.0;
    for (auto [y, e] : g.incident(p)) net += g.edge(e).conductance * (f[p] - f[y]);
    return net;
}

/// Boundary response (Dirichlet-to-Neumann) matrix: entry (i,j) is the flux
/// at boundary vertex i of the harmonic extension of the indicator of
/// boundary vertex j.  Symmetric, positive semidefinite, kernel spanned by
/// constants.  Boundary indices are taken in ascending order.
inline Eigen::MatrixXd dirichlet_to_neumann(const WeightedGraph& g,
                                            const std::vector<int>& boundary) {
    std::vector<int> b = checked_vertex_set(g, boundary, "dirichlet_to_neumann");
    if (b.empty()) throw PreconditionError("dirichlet_to_neumann: boundary set is empty");
    return schur_complement_onto(laplacian_matrix(g), b);
}

/**
 * Solve the Neumann problem: find h harmonic outside the boundary set whose
 * normal derivative at each boundary vertex equals the prescribed flux.
 * Solvable iff the fluxes sum to zero (within 1e-12 of the flux magnitude);
 * the solution is unique up to an additive constant and returned normalized
 * to mean zero against the vertex measure.
 */
inline GraphFunction solve_neumann(const WeightedGraph& g, const NeumannData& data) {
    auto [boundary, fluxes] = detail::sorted_boundary(g, data.boundary, data.fluxes, "solve_neumann");
    const double scale = fluxes.cwiseAbs().sum();
    if (std::abs(fluxes.sum()) > 1e-12 * std::max(scale, 1.0))
        throw SolvabilityError("solve_neumann: fluxes must sum to zero (got " +
                               std::to_string(fluxes.sum()) + ")");

    const Eigen::MatrixXd response = dirichlet_to_neumann(g, boundary);
    const Eigen::VectorXd boundary_values = solve_grounded(response, fluxes);

    BoundaryData dirichlet{boundary, boundary_values};
    GraphFunction h = harmonic_extension(g, dirichlet);
    h.array() -= g.vertex_measure().dot(h) / g.total_measure();
    return h;
}

} // namespace graphforms

#endif
