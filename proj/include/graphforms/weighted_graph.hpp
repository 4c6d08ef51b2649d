#ifndef GRAPHFORMS_WEIGHTED_GRAPH_HPP
#define GRAPHFORMS_WEIGHTED_GRAPH_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "graphforms/errors.hpp"

namespace graphforms {

/// Vertex-indexed real function (length = vertex count).
using GraphFunction = Eigen::VectorXd;

/// Edge-indexed coefficients of a 1-form in the graph's edge order.
/// Reversing an edge's orientation would negate its coefficient; orientations
/// are fixed at construction, so coefficients are plain reals per edge.
using OneForm = Eigen::VectorXd;

/// Vertex-indexed atom weights of a (possibly signed) measure.
using VertexMeasure = Eigen::VectorXd;

/// Oriented edge with a strictly positive conductance.
struct Edge {
    int tail = 0;
    int head = 0;
    double conductance = 1.0;
};

/**
 * Finite connected weighted graph.
 *
 * Carries an edge list with fixed orientations (tail -> head), strictly
 * positive conductances, and a strictly positive measure on vertices.
 * Self-loops and parallel edges are rejected, as is any disconnected input.
 * Instances are immutable after construction, so concurrent reads are safe.
 */
class WeightedGraph {
public:
    WeightedGraph(int vertex_count, std::vector<Edge> edges)
        : WeightedGraph(vertex_count, std::move(edges),
                        Eigen::VectorXd::Ones(std::max(vertex_count, 0))) {}

    WeightedGraph(int vertex_count, std::vector<Edge> edges, VertexMeasure vertex_measure)
        : vertex_count_(vertex_count),
          edges_(std::move(edges)),
          vertex_measure_(std::move(vertex_measure)) {
        validate();
        incident_.assign(vertex_count_, {});
        for (int e = 0; e < edge_count(); ++e) {
            incident_[edges_[e].tail].emplace_back(edges_[e].head, e);
            incident_[edges_[e].head].emplace_back(edges_[e].tail, e);
        }
        check_connected();
    }

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }
    const VertexMeasure& vertex_measure() const { return vertex_measure_; }
    double total_measure() const { return vertex_measure_.sum(); }

    /// (neighbor, edge index) pairs at a vertex, in edge insertion order.
    const std::vector<std::pair<int, int>>& incident(int v) const {
        return incident_[static_cast<size_t>(v)];
    }

    int degree(int v) const { return static_cast<int>(incident_[static_cast<size_t>(v)].size()); }

private:
    void validate() const {
        if (vertex_count_ <= 0)
            throw PreconditionError("graph needs at least one vertex");
        if (vertex_measure_.size() != vertex_count_)
            throw PreconditionError("vertex measure length must equal vertex count");
        for (int x = 0; x < vertex_count_; ++x)
            if (!(vertex_measure_[x] > 0.0))
                throw PreconditionError("vertex measure must be strictly positive at vertex " +
                                        std::to_string(x));
        std::set<std::pair<int, int>> seen;
        for (const Edge& e : edges_) {
            if (e.tail < 0 || e.tail >= vertex_count_ || e.head < 0 || e.head >= vertex_count_)
                throw PreconditionError("edge endpoint out of range");
            if (e.tail == e.head)
                throw PreconditionError("self-loops are not allowed");
            if (!(e.conductance > 0.0))
                throw PreconditionError("conductance must be strictly positive");
            auto key = std::minmax(e.tail, e.head);
            if (!seen.insert({key.first, key.second}).second)
                throw PreconditionError("parallel edge between " + std::to_string(key.first) +
                                        " and " + std::to_string(key.second));
        }
    }

    void check_connected() const {
        std::vector<char> visited(static_cast<size_t>(vertex_count_), 0);
        std::vector<int> stack{0};
        visited[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [w, e] : incident_[static_cast<size_t>(v)]) {
                (void)e;
                if (!visited[static_cast<size_t>(w)]) {
                    visited[static_cast<size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
        for (int v = 0; v < vertex_count_; ++v)
            if (!visited[static_cast<size_t>(v)])
                throw PreconditionError("graph must be connected (vertex " + std::to_string(v) +
                                        " unreachable from vertex 0)");
    }

    int vertex_count_;
    std::vector<Edge> edges_;
    VertexMeasure vertex_measure_;
    std::vector<std::vector<std::pair<int, int>>> incident_;
};

/// Sorted copy of a vertex-index list; rejects out-of-range and duplicate entries.
inline std::vector<int> checked_vertex_set(const WeightedGraph& g, std::vector<int> vertices,
                                           const char* what) {
    std::sort(vertices.begin(), vertices.end());
    for (size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] < 0 || vertices[i] >= g.vertex_count())
            throw PreconditionError(std::string(what) + ": vertex index out of range");
        if (i > 0 && vertices[i] == vertices[i - 1])
            throw PreconditionError(std::string(what) + ": duplicate vertex " +
                                    std::to_string(vertices[i]));
    }
    return vertices;
}

/// True when the subgraph induced by `vertices` (assumed sorted) is connected.
/// An empty set counts as connected.
inline bool induces_connected_subgraph(const WeightedGraph& g, const std::vector<int>& vertices) {
    if (vertices.empty()) return true;
    std::vector<char> inside(static_cast<size_t>(g.vertex_count()), 0);
    for (int v : vertices) inside[static_cast<size_t>(v)] = 1;
    std::vector<char> visited(static_cast<size_t>(g.vertex_count()), 0);
    std::vector<int> stack{vertices.front()};
    visited[static_cast<size_t>(vertices.front())] = 1;
    size_t reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [w, e] : g.incident(v)) {
            (void)e;
            if (inside[static_cast<size_t>(w)] && !visited[static_cast<size_t>(w)]) {
                visited[static_cast<size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == vertices.size();
}

/// Vertices within graph distance `radius` of `seeds` (sorted, includes the seeds).
inline std::vector<int> neighborhood(const WeightedGraph& g, const std::vector<int>& seeds,
                                     int radius) {
    if (radius < 0) throw PreconditionError("neighborhood radius must be nonnegative");
    std::vector<int> dist(static_cast<size_t>(g.vertex_count()), -1);
    std::vector<int> frontier;
    for (int s : seeds) {
        if (s < 0 || s >= g.vertex_count())
            throw PreconditionError("neighborhood: vertex index out of range");
        if (dist[static_cast<size_t>(s)] < 0) {
            dist[static_cast<size_t>(s)] = 0;
            frontier.push_back(s);
        }
    }
    for (int step = 0; step < radius && !frontier.empty(); ++step) {
        std::vector<int> next;
        for (int v : frontier)
            for (auto [w, e] : g.incident(v)) {
                (void)e;
                if (dist[static_cast<size_t>(w)] < 0) {
                    dist[static_cast<size_t>(w)] = step + 1;
                    next.push_back(w);
                }
            }
        frontier = std::move(next);
    }
    std::vector<int> result;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (dist[static_cast<size_t>(v)] >= 0) result.push_back(v);
    return result;
}

} // namespace graphforms

#endif
