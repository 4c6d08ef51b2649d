#include <catch2/catch_amalgamated.hpp>

#include "graphforms/builders.hpp"
#include "graphforms/cover.hpp"
#include "graphforms/dirichlet.hpp"
#include "support.hpp"

using graphforms::BuilderSpec;
using graphforms::GraphFamily;
using graphforms::PreconditionError;
using graphforms::WeightedGraph;
using gftest::approx;

TEST_CASE("family names round trip") {
    for (GraphFamily fam :
         {GraphFamily::cycle, GraphFamily::path, GraphFamily::tree,
          GraphFamily::sierpinski_gasket, GraphFamily::metric_graph, GraphFamily::ladder}) {
        REQUIRE(graphforms::family_from_name(graphforms::family_name(fam)) == fam);
    }
    REQUIRE_THROWS_AS(graphforms::family_from_name("moebius"), PreconditionError);
}

TEST_CASE("cycle, path, tree and ladder counts") {
    WeightedGraph c = graphforms::build({GraphFamily::cycle, 6});
    REQUIRE(c.vertex_count() == 6);
    REQUIRE(c.edge_count() == 6);
    REQUIRE(graphforms::first_betti(c) == 1);
    for (int v = 0; v < 6; ++v) REQUIRE(c.degree(v) == 2);
    REQUIRE_THROWS_AS(graphforms::build({GraphFamily::cycle, 2}), PreconditionError);

    WeightedGraph p = graphforms::build({GraphFamily::path, 5});
    REQUIRE(p.edge_count() == 4);
    REQUIRE(graphforms::first_betti(p) == 0);
    WeightedGraph single = graphforms::build({GraphFamily::path, 1});
    REQUIRE(single.vertex_count() == 1);
    REQUIRE(single.edge_count() == 0);

    WeightedGraph t = graphforms::build({GraphFamily::tree, 13, {}, 3});
    REQUIRE(t.vertex_count() == 13);
    REQUIRE(t.edge_count() == 12);
    REQUIRE(graphforms::first_betti(t) == 0);
    REQUIRE(t.degree(0) == 3);

    WeightedGraph l = graphforms::build({GraphFamily::ladder, 5});
    REQUIRE(l.vertex_count() == 10);
    REQUIRE(l.edge_count() == 13);
    REQUIRE(graphforms::first_betti(l) == 4);
}

TEST_CASE("gasket counts, conductances and covers") {
    for (int level = 1; level <= 3; ++level) {
        graphforms::GasketGraph gg = graphforms::build_gasket(level);
        const int edges = 1;
        (void)edges;
        const int e = static_cast<int>(std::pow(3, level + 1) + 0.5);
        REQUIRE(gg.graph.edge_count() == e);
        REQUIRE(gg.graph.vertex_count() == (e + 3) / 2);
        REQUIRE(graphforms::first_betti(gg.graph) == (e - 1) / 2);
        for (const auto& ed : gg.graph.edges())
            REQUIRE(approx(ed.conductance, std::pow(5.0 / 3.0, level), 1e-12));

        graphforms::Cover cover = graphforms::gasket_cell_cover(gg);
        REQUIRE_NOTHROW(graphforms::validate_cover(gg.graph, cover));
        REQUIRE(cover.size() == static_cast<int>(gg.cells.size()));
        REQUIRE(graphforms::triple_intersections_empty(cover, gg.graph.vertex_count()));

        std::vector<int> coarse = graphforms::gasket_coarse_vertices(gg);
        graphforms::GasketGraph down = graphforms::build_gasket(level - 1);
        REQUIRE(static_cast<int>(coarse.size()) == down.graph.vertex_count());
    }
    REQUIRE(graphforms::first_betti(graphforms::build_gasket(1).graph) == 4);
    REQUIRE(graphforms::first_betti(graphforms::build_gasket(2).graph) == 13);
    REQUIRE(graphforms::first_betti(graphforms::build_gasket(3).graph) == 40);
}

TEST_CASE("gasket coarse vertices halve onto the coarser vertex labels") {
    for (int level = 1; level <= 3; ++level) {
        graphforms::GasketGraph fine = graphforms::build_gasket(level);
        graphforms::GasketGraph down = graphforms::build_gasket(level - 1);
        std::vector<int> coarse = graphforms::gasket_coarse_vertices(fine);
        for (size_t i = 0; i < coarse.size(); ++i) {
            const auto& c = fine.coordinates[static_cast<size_t>(coarse[i])];
            REQUIRE(c[0] % 2 == 0);
            REQUIRE(c[1] % 2 == 0);
            REQUIRE(down.coordinates[i][0] == c[0] / 2);
            REQUIRE(down.coordinates[i][1] == c[1] / 2);
        }
    }
}

TEST_CASE("metric graphs subdivide edges into series segments") {
    BuilderSpec spec;
    spec.family = GraphFamily::metric_graph;
    spec.metric_graph_edges = {{0, 1, 2.0}};
    spec.subdivision = 4;
    WeightedGraph g = graphforms::build(spec);
    REQUIRE(g.vertex_count() == 5);
    REQUIRE(g.edge_count() == 4);
    for (const auto& e : g.edges()) REQUIRE(approx(e.conductance, 2.0, 1e-15));

    // series reduction recovers the prescribed resistance
    WeightedGraph traced = graphforms::schur_trace(g, {0, 1});
    REQUIRE(traced.edge_count() == 1);
    REQUIRE(approx(traced.edge(0).conductance, 0.5, 1e-12));

    spec.metric_graph_edges = {{0, 1, 0.5}, {1, 2, 2.0}, {2, 0, 1.0}, {1, 3, 1.0}};
    spec.subdivision = 1;
    WeightedGraph h = graphforms::build(spec);
    REQUIRE(h.vertex_count() == 4);
    REQUIRE(h.edge_count() == 4);
    REQUIRE(graphforms::first_betti(h) == 1);
    REQUIRE(approx(h.edge(0).conductance, 2.0, 1e-15));

    spec.metric_graph_edges = {{0, 1, -1.0}};
    REQUIRE_THROWS_AS(graphforms::build(spec), PreconditionError);
    spec.metric_graph_edges.clear();
    REQUIRE_THROWS_AS(graphforms::build(spec), PreconditionError);
}

TEST_CASE("gasket rejects out of range levels and the zoo stays valid") {
    REQUIRE_THROWS_AS(graphforms::build_gasket(-1), PreconditionError);
    REQUIRE_THROWS_AS(graphforms::build_gasket(13), PreconditionError);
    REQUIRE_THROWS_AS(graphforms::gasket_coarse_vertices(graphforms::build_gasket(0)),
                      PreconditionError);
    for (const WeightedGraph& g : gftest::family_zoo()) {
        REQUIRE(g.vertex_count() >= 1);
        REQUIRE(graphforms::first_betti(g) >= 0);
    }
}
