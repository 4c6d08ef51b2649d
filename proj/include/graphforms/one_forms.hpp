#ifndef GRAPHFORMS_ONE_FORMS_HPP
#define GRAPHFORMS_ONE_FORMS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "graphforms/cover.hpp"
#include "graphforms/dirichlet.hpp"
#include "graphforms/errors.hpp"
#include "graphforms/linalg.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

namespace detail {
inline void check_form(const WeightedGraph& g, const OneForm& u, const char* what) {
    if (u.size() != g.edge_count())
        throw PreconditionError(std::string(what) + ": form length " + std::to_string(u.size()) +
                                " does not match edge count " + std::to_string(g.edge_count()));
}
} // namespace detail

/// Derivation: (df)(e) = f(head) - f(tail).  Its squared norm in the 1-form
/// inner product reproduces the Dirichlet energy of f exactly.
inline OneForm derivation(const WeightedGraph& g, const GraphFunction& f) {
    detail::check_function(g, f, "derivation");
    OneForm u(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e)
        u[e] = f[g.edge(e).head] - f[g.edge(e).tail];
    return u;
}

/// Inner product of 1-forms: sum over edges of conductance * u(e) * v(e).
inline double inner(const WeightedGraph& g, const OneForm& u, const OneForm& v) {
    detail::check_form(g, u, "inner");
    detail::check_form(g, v, "inner");
    double total = 0.0;
    for (int e = 0; e < g.edge_count(); ++e)
        total += g.edge(e).conductance * u[e] * v[e];
    return total;
}

inline double form_norm(const WeightedGraph& g, const OneForm& u) {
    return std::sqrt(std::max(0.0, inner(g, u, u)));
}

/// Module action of a function on a 1-form via the endpoint average
/// h_bar(e) = (h(tail)+h(head))/2.  With this choice the Leibniz rule
/// d(f*h) = f . dh + h . df is an exact algebraic identity.
inline OneForm module_action(const WeightedGraph& g, const GraphFunction& h, const OneForm& u) {
    detail::check_function(g, h, "module_action");
    detail::check_form(g, u, "module_action");
    OneForm result(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e)
        result[e] = 0.5 * (h[g.edge(e).tail] + h[g.edge(e).head]) * u[e];
    return result;
}

/// Codifferential, the negative adjoint of the derivation:
///   <f, d*v>_{L2(m)} = -<df, v>_H  for all f.
inline GraphFunction codifferential(const WeightedGraph& g, const OneForm& v) {
    detail::check_form(g, v, "codifferential");
    GraphFunction result = GraphFunction::Zero(g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const double weighted = g.edge(e).conductance * v[e];
        result[g.edge(e).tail] += weighted;
        result[g.edge(e).head] -= weighted;
    }
    return result.array() / g.vertex_measure().array();
}

/// Hodge Laplacian on 1-forms, d d*.  Self-adjoint in the 1-form inner
/// product, with kernel equal to the kernel of the codifferential.
inline OneForm hodge_laplacian(const WeightedGraph& g, const OneForm& v) {
    return derivation(g, codifferential(g, v));
}

/// Matrix of the codifferential (vertex count x edge count).
inline Eigen::MatrixXd codifferential_matrix(const WeightedGraph& g) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(g.vertex_count(), g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        d(g.edge(e).tail, e) += g.edge(e).conductance / g.vertex_measure()[g.edge(e).tail];
        d(g.edge(e).head, e) -= g.edge(e).conductance / g.vertex_measure()[g.edge(e).head];
    }
    return d;
}

/// Matrix of the Hodge Laplacian (edge count x edge count).
inline Eigen::MatrixXd hodge_laplacian_matrix(const WeightedGraph& g) {
    Eigen::MatrixXd b(g.edge_count(), g.vertex_count());
    b.setZero();
    for (int e = 0; e < g.edge_count(); ++e) {
        b(e, g.edge(e).tail) = -1.0;
        b(e, g.edge(e).head) = 1.0;
    }
    return b * codifferential_matrix(g);
}

/// Orthogonal decomposition of a 1-form into an exact part and a harmonic
/// (divergence-free) remainder, with the generating potential.
struct HodgeSplit {
    OneForm exact;
    OneForm harmonic;
    GraphFunction potential;  // mean zero with respect to the vertex measure
};

/**
 * Hodge decomposition: v = d(potential) + harmonic, the two parts orthogonal
 * in the 1-form inner product and the harmonic part divergence free.  The
 * potential solves the always-consistent normal equations L f = B^T W v and
 * is normalized to mean zero against the vertex measure.
 */
inline HodgeSplit hodge_decompose(const WeightedGraph& g, const OneForm& v) {
    detail::check_form(g, v, "hodge_decompose");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const double weighted = g.edge(e).conductance * v[e];
        rhs[g.edge(e).tail] -= weighted;
        rhs[g.edge(e).head] += weighted;
    }
    GraphFunction potential = solve_grounded(laplacian_matrix(g), rhs);
    const double mean =
        g.vertex_measure().dot(potential) / g.total_measure();
    potential.array() -= mean;
    OneForm exact = derivation(g, potential);
    return HodgeSplit{exact, v - exact, std::move(potential)};
}

/**
 * Orthonormal basis of the space of divergence-free (harmonic) 1-forms.
 * Fundamental cycles of a breadth-first spanning tree rooted at vertex 0 are
 * projected onto the kernel of the codifferential and orthonormalized, in
 * ascending order of their defining non-tree edge.  The projection matters
 * only for non-uniform conductances; cycle circulations are already
 * divergence free in the unweighted sense.  Size equals |E| - |V| + 1.
 */
inline std::vector<OneForm> harmonic_basis(const WeightedGraph& g) {
    const int n = g.vertex_count();
    std::vector<int> parent(static_cast<size_t>(n), -1);
    std::vector<int> parent_edge(static_cast<size_t>(n), -1);
    std::vector<int> depth(static_cast<size_t>(n), -1);
    std::vector<char> edge_in_tree(static_cast<size_t>(g.edge_count()), 0);
    std::vector<int> queue{0};
    depth[0] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        const int v = queue[qi];
        for (auto [w, e] : g.incident(v))
            if (depth[static_cast<size_t>(w)] < 0) {
                depth[static_cast<size_t>(w)] = depth[static_cast<size_t>(v)] + 1;
                parent[static_cast<size_t>(w)] = v;
                parent_edge[static_cast<size_t>(w)] = e;
                edge_in_tree[static_cast<size_t>(e)] = 1;
                queue.push_back(w);
            }
    }

    // Add the signed tree path from `from` up to `ancestor` to the form.
    auto add_path_up = [&](OneForm& z, int from, int ancestor, double sign) {
        for (int v = from; v != ancestor; v = parent[static_cast<size_t>(v)]) {
            const int e = parent_edge[static_cast<size_t>(v)];
            z[e] += (g.edge(e).tail == v ? 1.0 : -1.0) * sign;
        }
    };

    std::vector<OneForm> basis;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (edge_in_tree[static_cast<size_t>(e)]) continue;
        // Fundamental cycle: traverse e from tail to head, then return to the
        // tail through the tree.
        OneForm z = OneForm::Zero(g.edge_count());
        z[e] = 1.0;
        int a = g.edge(e).head, b = g.edge(e).tail;
        while (depth[static_cast<size_t>(a)] > depth[static_cast<size_t>(b)])
            a = parent[static_cast<size_t>(a)];
        while (depth[static_cast<size_t>(b)] > depth[static_cast<size_t>(a)])
            b = parent[static_cast<size_t>(b)];
        while (a != b) {
            a = parent[static_cast<size_t>(a)];
            b = parent[static_cast<size_t>(b)];
        }
        add_path_up(z, g.edge(e).head, a, 1.0);
        add_path_up(z, g.edge(e).tail, a, -1.0);

        OneForm candidate = hodge_decompose(g, z).harmonic;
        for (const OneForm& u : basis) candidate -= inner(g, candidate, u) * u;
        const double norm = form_norm(g, candidate);
        if (norm <= 1e-12 * (1.0 + form_norm(g, z)))
            throw std::runtime_error("harmonic_basis: degenerate cycle projection");
        basis.push_back(candidate / norm);
    }
    return basis;
}

/// Energy measure of a pair of 1-forms: each edge's contribution
/// c_e u(e) v(e) split half-half between its endpoints.  Total mass equals
/// inner(g, u, v); for u = df it coincides with energy_measure(g, f).
inline VertexMeasure form_energy_measure(const WeightedGraph& g, const OneForm& u,
                                         const OneForm& v) {
    detail::check_form(g, u, "form_energy_measure");
    detail::check_form(g, v, "form_energy_measure");
    VertexMeasure atoms = VertexMeasure::Zero(g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const double contribution = 0.5 * g.edge(e).conductance * u[e] * v[e];
        atoms[g.edge(e).tail] += contribution;
        atoms[g.edge(e).head] += contribution;
    }
    return atoms;
}

inline VertexMeasure form_energy_measure(const WeightedGraph& g, const OneForm& u) {
    return form_energy_measure(g, u, u);
}

/// Derivation of the energy measure of u, paired against a 1-form v:
///   -sum_x (d*v)(x) * Gamma(u)({x}).
/// Vanishes whenever v is divergence free.
inline double form_energy_measure_derivation(const WeightedGraph& g, const OneForm& u,
                                             const OneForm& v) {
    const GraphFunction divergence = codifferential(g, v);
    const VertexMeasure atoms = form_energy_measure(g, u);
    return -divergence.dot(atoms);
}

/// Per-set potentials realizing a 1-form as locally exact, with residuals and
/// local-harmonicity flags.  Potentials are full-length vectors whose values
/// outside the owning cover set are zero and carry no meaning.
struct LocalPatchWitness {
    std::vector<GraphFunction> potentials;
    std::vector<double> residuals;
    std::vector<bool> harmonic_flags;
};

struct LocalExactness {
    bool locally_exact = false;
    int first_failed_set = -1;
    double first_failed_residual = 0.0;
    LocalPatchWitness witness;
};

/**
 * Test whether u restricted to each cover set is the derivation of some
 * potential on that set.  For each set the best potential is computed by
 * least squares over the edges inside the set; the set passes when the
 * residual is below tolerance * max(1, |u|_H).  A set's harmonic flag is true
 * when its potential is additionally harmonic at every interior vertex of the
 * set (vertices all of whose neighbors lie inside), the graph reading of a
 * potential harmonic on the patch.
 */
inline LocalExactness local_exactness(const WeightedGraph& g, const OneForm& u,
                                      const Cover& cover, double tolerance = 1e-10) {
    detail::check_form(g, u, "local_exactness");
    validate_cover(g, cover);
    const auto sets = normalized_sets(cover);
    const double scale = std::max(1.0, form_norm(g, u));

    LocalExactness result;
    result.locally_exact = true;
    for (size_t k = 0; k < sets.size(); ++k) {
        const auto& s = sets[k];
        std::vector<int> local_of(static_cast<size_t>(g.vertex_count()), -1);
        for (size_t i = 0; i < s.size(); ++i) local_of[static_cast<size_t>(s[i])] = static_cast<int>(i);

        std::vector<int> inside_edges;
        for (int e = 0; e < g.edge_count(); ++e)
            if (local_of[static_cast<size_t>(g.edge(e).tail)] >= 0 &&
                local_of[static_cast<size_t>(g.edge(e).head)] >= 0)
                inside_edges.push_back(e);

        const int ns = static_cast<int>(s.size());
        Eigen::MatrixXd l = Eigen::MatrixXd::Zero(ns, ns);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ns);
        for (int e : inside_edges) {
            const Edge& ed = g.edge(e);
            const int a = local_of[static_cast<size_t>(ed.tail)];
            const int b = local_of[static_cast<size_t>(ed.head)];
            l(a, a) += ed.conductance;
            l(b, b) += ed.conductance;
            l(a, b) -= ed.conductance;
            l(b, a) -= ed.conductance;
            rhs[a] -= ed.conductance * u[e];
            rhs[b] += ed.conductance * u[e];
        }
        const Eigen::VectorXd f_local = solve_grounded(l, rhs);

        GraphFunction potential = GraphFunction::Zero(g.vertex_count());
        for (int i = 0; i < ns; ++i) potential[s[static_cast<size_t>(i)]] = f_local[i];

        double residual_sq = 0.0;
        for (int e : inside_edges) {
            const Edge& ed = g.edge(e);
            const double gap = u[e] - (potential[ed.head] - potential[ed.tail]);
            residual_sq += ed.conductance * gap * gap;
        }
        const double residual = std::sqrt(residual_sq);

        bool harmonic = true;
        for (int x : s) {
            bool interior = true;
            for (auto [y, e] : g.incident(x)) {
                (void)e;
                if (local_of[static_cast<size_t>(y)] < 0) {
                    interior = false;
                    break;
                }
            }
            if (!interior) continue;
            double net = 0.0, size_scale = 1.0;
            for (auto [y, e] : g.incident(x)) {
                const double c = g.edge(e).conductance;
                net += c * (potential[x] - potential[y]);
                size_scale += c * (std::abs(potential[x]) + std::abs(potential[y]));
            }
            if (std::abs(net) > tolerance * size_scale) {
                harmonic = false;
                break;
            }
        }

        result.witness.potentials.push_back(std::move(potential));
        result.witness.residuals.push_back(residual);
        result.witness.harmonic_flags.push_back(harmonic);
        if (residual > tolerance * scale && result.locally_exact) {
            result.locally_exact = false;
            result.first_failed_set = static_cast<int>(k);
            result.first_failed_residual = residual;
        }
    }
    return result;
}

} // namespace graphforms

#endif
