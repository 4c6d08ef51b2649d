#include <catch2/catch_amalgamated.hpp>

#include "graphforms/weighted_graph.hpp"
#include "support.hpp"

using graphforms::Edge;
using graphforms::PreconditionError;
using graphforms::WeightedGraph;

namespace {

Eigen::VectorXd ones(int n) { return Eigen::VectorXd::Ones(n); }

} // namespace

TEST_CASE("graph construction validates its input") {
    std::vector<Edge> triangle = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}};
    REQUIRE_NOTHROW(WeightedGraph(3, triangle, ones(3)));

    SECTION("self loops are rejected") {
        std::vector<Edge> edges = {{0, 0, 1.0}, {0, 1, 1.0}};
        REQUIRE_THROWS_AS(WeightedGraph(2, edges, ones(2)), PreconditionError);
    }
    SECTION("parallel edges are rejected in either orientation") {
        std::vector<Edge> edges = {{0, 1, 1.0}, {1, 0, 2.0}};
        REQUIRE_THROWS_AS(WeightedGraph(2, edges, ones(2)), PreconditionError);
    }
    SECTION("conductances must be positive") {
        std::vector<Edge> edges = {{0, 1, 0.0}};
        REQUIRE_THROWS_AS(WeightedGraph(2, edges, ones(2)), PreconditionError);
        edges[0].conductance = -1.0;
        REQUIRE_THROWS_AS(WeightedGraph(2, edges, ones(2)), PreconditionError);
    }
    SECTION("measures must be positive and sized to the vertex count") {
        std::vector<Edge> edges = {{0, 1, 1.0}};
        Eigen::VectorXd bad(2);
        bad << 1.0, 0.0;
        REQUIRE_THROWS_AS(WeightedGraph(2, edges, bad), PreconditionError);
        REQUIRE_THROWS_AS(WeightedGraph(2, edges, ones(3)), PreconditionError);
    }
    SECTION("endpoints must exist") {
        std::vector<Edge> edges = {{0, 5, 1.0}};
        REQUIRE_THROWS_AS(WeightedGraph(2, edges, ones(2)), PreconditionError);
    }
    SECTION("the graph must be connected") {
        std::vector<Edge> edges = {{0, 1, 1.0}, {2, 3, 1.0}};
        REQUIRE_THROWS_AS(WeightedGraph(4, edges, ones(4)), PreconditionError);
    }
    SECTION("a single vertex with no edges is allowed") {
        REQUIRE_NOTHROW(WeightedGraph(1, {}, ones(1)));
    }
}

TEST_CASE("adjacency structure matches the edge list") {
    std::vector<Edge> edges = {{0, 1, 2.0}, {1, 2, 3.0}, {2, 0, 5.0}};
    WeightedGraph g(3, edges, ones(3));

    REQUIRE(g.vertex_count() == 3);
    REQUIRE(g.edge_count() == 3);
    REQUIRE(g.total_measure() == Catch::Approx(3.0));

    for (int v = 0; v < 3; ++v) {
        REQUIRE(g.degree(v) == 2);
        for (const auto& [other, e] : g.incident(v)) {
            const Edge& ed = g.edge(e);
            REQUIRE(((ed.tail == v && ed.head == other) || (ed.head == v && ed.tail == other)));
        }
    }
}

TEST_CASE("vertex set helpers sort, deduplicate and range check") {
    WeightedGraph g = graphforms::build({graphforms::GraphFamily::path, 5});

    REQUIRE(graphforms::checked_vertex_set(g, {3, 1}, "set") == std::vector<int>{1, 3});
    REQUIRE_THROWS_AS(graphforms::checked_vertex_set(g, {1, 1}, "set"), PreconditionError);
    REQUIRE_THROWS_AS(graphforms::checked_vertex_set(g, {-1}, "set"), PreconditionError);
    REQUIRE_THROWS_AS(graphforms::checked_vertex_set(g, {5}, "set"), PreconditionError);

    REQUIRE(graphforms::induces_connected_subgraph(g, {1, 2, 3}));
    REQUIRE_FALSE(graphforms::induces_connected_subgraph(g, {0, 2}));

    REQUIRE(graphforms::neighborhood(g, {2}, 0) == std::vector<int>{2});
    REQUIRE(graphforms::neighborhood(g, {2}, 1) == std::vector<int>{1, 2, 3});
    REQUIRE(graphforms::neighborhood(g, {0}, 2) == std::vector<int>{0, 1, 2});
    REQUIRE(graphforms::neighborhood(g, {0, 4}, 1) == std::vector<int>{0, 1, 3, 4});
}

TEST_CASE("random generators produce valid graphs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        WeightedGraph t = gftest::random_tree(8, rng);
        REQUIRE(t.edge_count() == t.vertex_count() - 1);
        WeightedGraph c = gftest::random_connected(9, 4, rng);
        REQUIRE(c.edge_count() == c.vertex_count() - 1 + 4);
    }
}
