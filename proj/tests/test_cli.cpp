#include <catch2/catch_amalgamated.hpp>
#include <graphforms/graphforms.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "support.hpp"

using namespace graphforms;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("graphforms_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string cycle_spec(int n) {
    Json doc;
    doc["type"] = "builder_spec";
    doc["family"] = "cycle";
    doc["level_or_size"] = n;
    return dump_document(doc);
}

} // namespace

TEST_CASE("build command emits a graph document with its loop count") {
    TempDir dir;
    write_file(dir.file("in.json"), cycle_spec(6));
    RunConfig config{"build", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 0);

    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["type"] == "weighted_graph");
    REQUIRE(out["vertex_count"] == 6);
    REQUIRE(out["first_betti"] == 1);
    const WeightedGraph g = graph_from_document(out);
    REQUIRE(g.edge_count() == 6);
}

TEST_CASE("hodge command reports the split and writes plot tables") {
    TempDir dir;
    const WeightedGraph g = build({GraphFamily::cycle, 4});
    GraphFunction f = GraphFunction::Zero(4);
    f[0] = 1.0;
    const OneForm v = derivation(g, f) + OneForm::Ones(4);

    Json in;
    in["graph"] = to_document(g);
    in["form"] = detail::vector_field(v);
    write_file(dir.file("in.json"), dump_document(in));

    RunConfig config{"hodge", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 0);

    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["type"] == "hodge_result");
    REQUIRE(out["harmonic_dimension"] == 1);
    REQUIRE(out["reconstruction_residual"].get<double>() < 1e-10);
    REQUIRE(out["orthogonality_residual"].get<double>() < 1e-10);
    REQUIRE(out["within_tolerance"] == true);
    const Eigen::VectorXd harmonic =
        detail::as_vector(out["harmonic"]["values"], "test");
    for (int e = 0; e < 4; ++e) REQUIRE(gftest::approx(harmonic[e], 1.0, 1e-10));

    const std::string edges = read_file(dir.file("out.json") + ".edges.tsv");
    REQUIRE(edges.rfind("edge\ttail\thead\tconductance\tform\texact\tharmonic\n", 0) == 0);
    REQUIRE(std::count(edges.begin(), edges.end(), '\n') == 5);
    const std::string vertices = read_file(dir.file("out.json") + ".vertices.tsv");
    REQUIRE(vertices.rfind("vertex\tmeasure\tpotential\n", 0) == 0);
    REQUIRE(std::count(vertices.begin(), vertices.end(), '\n') == 5);
}

TEST_CASE("cech command accepts explicit covers") {
    TempDir dir;
    Json in;
    in["graph"] = to_document(build({GraphFamily::cycle, 4}));
    Json cover;
    cover["sets"] = Json::array({Json::array({0, 1}), Json::array({1, 2}),
                                 Json::array({2, 3}), Json::array({3, 0})});
    in["cover"] = cover;
    write_file(dir.file("in.json"), dump_document(in));

    RunConfig config{"cech", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 0);
    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["h1_dimension"] == 1);
    REQUIRE(out["nerve"]["zero_simplices"] == 4);
    REQUIRE(out["nerve"]["one_simplices"] == 4);
    REQUIRE(out["nerve"]["two_simplices"] == 0);
    REQUIRE(out["correspondence"]["agree"] == true);
    REQUIRE(out["correspondence"]["harmonic_nontrivial"] == true);
}

TEST_CASE("cech command builds a cover when none is given") {
    TempDir dir;
    Json in;
    in["graph"] = to_document(build({GraphFamily::path, 5}));
    write_file(dir.file("in.json"), dump_document(in));

    RunConfig config{"cech", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 0);
    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["h1_dimension"] == 0);
    REQUIRE(out["correspondence"]["agree"] == true);
    REQUIRE(out.contains("cover_construction"));
}

TEST_CASE("capacity command computes the grounded equilibrium value") {
    TempDir dir;
    Json in;
    in["graph"] = to_document(build({GraphFamily::cycle, 4}));
    in["target"] = Json::array({0});
    write_file(dir.file("in.json"), dump_document(in));

    RunConfig config{"capacity", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 0);
    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(gftest::approx(out["capacity"].get<double>(), 15.0 / 7.0, 1e-12));
    REQUIRE(out["total_measure"].get<double>() == 4.0);
}

TEST_CASE("neumann command solves balanced flux problems") {
    TempDir dir;
    Json in;
    in["graph"] = to_document(build({GraphFamily::path, 5}));
    Json data;
    data["boundary"] = Json::array({0, 4});
    data["fluxes"] = Json::array({1.0, -1.0});
    in["neumann_data"] = data;
    write_file(dir.file("in.json"), dump_document(in));

    RunConfig config{"neumann", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 0);
    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["flux_residual_max"].get<double>() < 1e-10);
    REQUIRE(std::abs(out["gauss_green_sum"].get<double>()) < 1e-12);
    REQUIRE(std::abs(out["weighted_mean"].get<double>()) < 1e-12);
}

TEST_CASE("neumann command rejects unbalanced fluxes with the solvability code") {
    TempDir dir;
    Json in;
    in["graph"] = to_document(build({GraphFamily::path, 5}));
    Json data;
    data["boundary"] = Json::array({0, 4});
    data["fluxes"] = Json::array({1.0, -0.25});
    in["neumann_data"] = data;
    write_file(dir.file("in.json"), dump_document(in));

    RunConfig config{"neumann", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 4);
    REQUIRE_FALSE(fs::exists(dir.file("out.json")));
}

TEST_CASE("ns command verifies stationary circulation") {
    TempDir dir;
    Json in;
    in["graph"] = to_document(build({GraphFamily::cycle, 4}));
    in["initial"] = Json::array({1.0, 1.0, 1.0, 1.0});
    in["viscosity"] = 2.5;
    write_file(dir.file("in.json"), dump_document(in));

    RunConfig config{"ns", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 0);
    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["viscosity"].get<double>() == 2.5);
    REQUIRE(out["weak_solution_report"]["pass"] == true);
    REQUIRE(out["weak_solution_report"]["max_residual"].get<double>() < 1e-10);
    const Eigen::VectorXd pressure =
        detail::as_vector(out["pressure"]["weights"], "test");
    for (int x = 0; x < 4; ++x) REQUIRE(gftest::approx(pressure[x], -0.5, 1e-12));

    REQUIRE(fs::exists(dir.file("out.json") + ".edges.tsv"));
    const std::string vertices = read_file(dir.file("out.json") + ".vertices.tsv");
    REQUIRE(vertices.rfind("vertex\tmeasure\tpressure\n", 0) == 0);
}

TEST_CASE("ns command solves boundary driven flow") {
    TempDir dir;
    Json in;
    in["graph"] = to_document(build({GraphFamily::path, 3}));
    Json data;
    data["boundary"] = Json::array({0, 2});
    data["fluxes"] = Json::array({-1.0, 1.0});
    in["neumann_data"] = data;
    write_file(dir.file("in.json"), dump_document(in));

    RunConfig config{"ns", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 0);
    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["boundary_report"]["pass"] == true);
    REQUIRE(out.contains("neumann_data"));
    const Eigen::VectorXd velocity = detail::as_vector(out["velocity"]["values"], "test");
    REQUIRE(gftest::approx(velocity[0], 1.0, 1e-12));
    REQUIRE(gftest::approx(velocity[1], 1.0, 1e-12));
}

TEST_CASE("ns command propagates divergence and solvability failures") {
    TempDir dir;
    SECTION("rotation free initial data is rejected as a precondition") {
        Json in;
        in["graph"] = to_document(build({GraphFamily::path, 4}));
        in["initial"] = Json::array({1.0, 0.0, 0.0});
        write_file(dir.file("in.json"), dump_document(in));
        RunConfig config{"ns", dir.file("in.json"), dir.file("out.json"), {}, {}};
        REQUIRE(run(config) == 3);
    }
    SECTION("unbalanced boundary fluxes are a solvability failure") {
        Json in;
        in["graph"] = to_document(build({GraphFamily::path, 4}));
        Json data;
        data["boundary"] = Json::array({0, 3});
        data["fluxes"] = Json::array({1.0, 1.0});
        in["neumann_data"] = data;
        write_file(dir.file("in.json"), dump_document(in));
        RunConfig config{"ns", dir.file("in.json"), dir.file("out.json"), {}, {}};
        REQUIRE(run(config) == 4);
    }
}

TEST_CASE("verify command reports identity checks and respects the seed") {
    TempDir dir;
    write_file(dir.file("in.json"), "{}");
    RunConfig config{"verify", dir.file("in.json"), dir.file("out.json"), {}, 7};
    REQUIRE(run(config) == 0);

    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["type"] == "verification_report");
    REQUIRE(out["pass"] == true);
    REQUIRE(out["seed"] == 7);
    REQUIRE(out["checks"].size() >= 10);
    for (const Json& check : out["checks"]) {
        REQUIRE(check["pass"] == true);
        REQUIRE(check["trials"].get<int>() > 0);
    }
}

TEST_CASE("verify command runs against a supplied graph") {
    TempDir dir;
    Json in;
    in["graph"] = to_document(build({GraphFamily::sierpinski_gasket, 1}));
    write_file(dir.file("in.json"), dump_document(in));
    RunConfig config{"verify", dir.file("in.json"), dir.file("out.json"), {}, {}};
    REQUIRE(run(config) == 0);
    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["pass"] == true);
}

TEST_CASE("verify output is byte identical across repeated runs") {
    TempDir dir;
    write_file(dir.file("in.json"), "{}");
    RunConfig config{"verify", dir.file("in.json"), dir.file("a.json"), {}, 42};
    REQUIRE(run(config) == 0);
    config.output_path = dir.file("b.json");
    REQUIRE(run(config) == 0);
    REQUIRE(read_file(dir.file("a.json")) == read_file(dir.file("b.json")));
    REQUIRE(!read_file(dir.file("a.json")).empty());
}

TEST_CASE("hodge output is byte identical across repeated runs") {
    TempDir dir;
    Json in;
    in["graph"] = parse_document(cycle_spec(5));
    in["form"] = Json::array({0.3, -1.2, 0.7, 2.0, -0.4});
    write_file(dir.file("in.json"), dump_document(in));
    RunConfig config{"hodge", dir.file("in.json"), dir.file("a.json"), {}, {}};
    REQUIRE(run(config) == 0);
    config.output_path = dir.file("b.json");
    REQUIRE(run(config) == 0);
    REQUIRE(read_file(dir.file("a.json")) == read_file(dir.file("b.json")));
    REQUIRE(read_file(dir.file("a.json") + ".edges.tsv") ==
            read_file(dir.file("b.json") + ".edges.tsv"));
}

TEST_CASE("an unreachable tolerance turns into the verification exit code") {
    TempDir dir;
    write_file(dir.file("in.json"), "{}");
    RunConfig config{"verify", dir.file("in.json"), dir.file("out.json"), 1e-300, 0};
    REQUIRE(run(config) == 5);
    // the report is still written so the failure can be inspected
    const Json out = parse_document(read_file(dir.file("out.json")));
    REQUIRE(out["pass"] == false);
}

TEST_CASE("cli failures map to documented exit codes") {
    TempDir dir;
    SECTION("unknown command") {
        write_file(dir.file("in.json"), "{}");
        RunConfig config{"transmogrify", dir.file("in.json"), dir.file("out.json"), {}, {}};
        REQUIRE(run(config) == 3);
    }
    SECTION("unreadable input") {
        RunConfig config{"build", dir.file("missing.json"), dir.file("out.json"), {}, {}};
        REQUIRE(run(config) == 2);
    }
    SECTION("syntactically invalid input") {
        write_file(dir.file("in.json"), "{\"type\": ");
        RunConfig config{"build", dir.file("in.json"), dir.file("out.json"), {}, {}};
        REQUIRE(run(config) == 2);
    }
    SECTION("semantically invalid graph") {
        write_file(dir.file("in.json"), cycle_spec(2));
        RunConfig config{"build", dir.file("in.json"), dir.file("out.json"), {}, {}};
        REQUIRE(run(config) == 3);
    }
    SECTION("nonpositive tolerance") {
        write_file(dir.file("in.json"), "{}");
        RunConfig config{"verify", dir.file("in.json"), dir.file("out.json"), -1.0, {}};
        REQUIRE(run(config) == 3);
    }
}
