#ifndef GRAPHFORMS_TESTS_SUPPORT_HPP
#define GRAPHFORMS_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "graphforms/builders.hpp"
#include "graphforms/weighted_graph.hpp"

namespace gftest {

using graphforms::Edge;
using graphforms::GraphFunction;
using graphforms::OneForm;
using graphforms::WeightedGraph;

inline bool approx(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline GraphFunction random_function(const WeightedGraph& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    GraphFunction f(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) f[v] = dist(rng);
    return f;
}

inline OneForm random_form(const WeightedGraph& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    OneForm u(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) u[e] = dist(rng);
    return u;
}

/// Random recursive tree on n vertices with random positive conductances and
/// measures.
inline WeightedGraph random_tree(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        edges.push_back({pick(rng), v, weight(rng)});
    }
    Eigen::VectorXd measure(n);
    for (int v = 0; v < n; ++v) measure[v] = weight(rng);
    return WeightedGraph(n, std::move(edges), std::move(measure));
}

/// Random connected graph: a random tree plus `extra` distinct non-tree edges
/// (capped by the number of available vertex pairs).
inline WeightedGraph random_connected(int n, int extra, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::set<std::pair<int, int>> used;
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        const int p = pick(rng);
        used.insert({std::min(p, v), std::max(p, v)});
        edges.push_back({p, v, weight(rng)});
    }
    const long pairs = static_cast<long>(n) * (n - 1) / 2;
    int added = 0;
    std::uniform_int_distribution<int> pick(0, n - 1);
    while (added < extra && static_cast<long>(used.size()) < pairs) {
        int a = pick(rng), b = pick(rng);
        if (a == b) continue;
        if (!used.insert({std::min(a, b), std::max(a, b)}).second) continue;
        edges.push_back({std::min(a, b), std::max(a, b), weight(rng)});
        ++added;
    }
    Eigen::VectorXd measure(n);
    for (int v = 0; v < n; ++v) measure[v] = weight(rng);
    return WeightedGraph(n, std::move(edges), std::move(measure));
}

/// A spread of builder-family graphs for property sweeps.
inline std::vector<WeightedGraph> family_zoo() {
    using graphforms::BuilderSpec;
    using graphforms::GraphFamily;
    std::vector<WeightedGraph> zoo;
    zoo.push_back(graphforms::build({GraphFamily::cycle, 4}));
    zoo.push_back(graphforms::build({GraphFamily::cycle, 7}));
    zoo.push_back(graphforms::build({GraphFamily::path, 6}));
    zoo.push_back(graphforms::build({GraphFamily::tree, 10, {}, 2}));
    zoo.push_back(graphforms::build({GraphFamily::tree, 13, {}, 3}));
    zoo.push_back(graphforms::build({GraphFamily::sierpinski_gasket, 1}));
    zoo.push_back(graphforms::build({GraphFamily::sierpinski_gasket, 2}));
    zoo.push_back(graphforms::build({GraphFamily::ladder, 5}));
    {
        BuilderSpec spec;
        spec.family = GraphFamily::metric_graph;
        spec.metric_graph_edges = {{0, 1, 0.5}, {1, 2, 2.0}, {2, 0, 1.0}, {1, 3, 1.0}};
        zoo.push_back(graphforms::build(spec));
    }
    return zoo;
}

/**
 * Capacity oracle: minimize energy(u) + |u|^2_{L2(m)} subject to u = 1 on the
 * target set by projected gradient descent from the all-ones start.  Slow and
 * independent of the linear-solve route.
 */
inline double capacity_oracle(const WeightedGraph& g, const std::vector<int>& target,
                              int iterations = 200000, double step = 0.02) {
    const int n = g.vertex_count();
    std::vector<char> pinned(static_cast<size_t>(n), 0);
    for (int t : target) pinned[static_cast<size_t>(t)] = 1;
    Eigen::VectorXd u = Eigen::VectorXd::Ones(n);

    for (int it = 0; it < iterations; ++it) {
        // gradient of u^T (L + M) u is 2 (L + M) u
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
        for (const Edge& e : g.edges()) {
            const double d = u[e.tail] - u[e.head];
            grad[e.tail] += 2.0 * e.conductance * d;
            grad[e.head] -= 2.0 * e.conductance * d;
        }
        for (int v = 0; v < n; ++v) grad[v] += 2.0 * g.vertex_measure()[v] * u[v];
        double moved = 0.0;
        for (int v = 0; v < n; ++v) {
            if (pinned[static_cast<size_t>(v)]) continue;
            u[v] -= step * grad[v];
            moved = std::max(moved, std::abs(step * grad[v]));
        }
        if (moved < 1e-14) break;
    }
    double value = u.dot(g.vertex_measure().asDiagonal() * u);
    for (const Edge& e : g.edges()) {
        const double d = u[e.head] - u[e.tail];
        value += e.conductance * d * d;
    }
    return value;
}

/**
 * Kirchhoff current-flow oracle: inject the given currents (summing to zero)
 * at the vertices, solve for potentials with a pseudo-inverse, and return the
 * edge flows phi(head) - phi(tail) in edge order.  Independent of the
 * library's Neumann route.
 */
inline OneForm current_flow_oracle(const WeightedGraph& g, const Eigen::VectorXd& injected) {
    const int n = g.vertex_count();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
        l(e.tail, e.tail) += e.conductance;
        l(e.head, e.head) += e.conductance;
        l(e.tail, e.head) -= e.conductance;
        l(e.head, e.tail) -= e.conductance;
    }
    const Eigen::VectorXd phi = l.completeOrthogonalDecomposition().solve(injected);
    OneForm flow(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e)
        flow[e] = phi[g.edge(e).head] - phi[g.edge(e).tail];
    return flow;
}

} // namespace gftest

#endif
