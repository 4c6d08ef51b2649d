#ifndef GRAPHFORMS_RUN_HPP
#define GRAPHFORMS_RUN_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "graphforms/builders.hpp"
#include "graphforms/cech.hpp"
#include "graphforms/dirichlet.hpp"
#include "graphforms/document.hpp"
#include "graphforms/errors.hpp"
#include "graphforms/navier_stokes.hpp"
#include "graphforms/neumann.hpp"
#include "graphforms/one_forms.hpp"
#include "graphforms/potential.hpp"
#include "graphforms/weighted_graph.hpp"

namespace graphforms {

struct RunConfig {
    std::string command;
    std::string input_path;
    std::string output_path;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline Json form_document(const OneForm& u) {
    Json doc;
    doc["type"] = "one_form";
    doc["values"] = vector_field(u);
    return doc;
}

inline Json function_document(const GraphFunction& f) {
    Json doc;
    doc["type"] = "graph_function";
    doc["values"] = vector_field(f);
    return doc;
}

inline Json measure_document(const VertexMeasure& mu) {
    Json doc;
    doc["type"] = "vertex_measure";
    doc["weights"] = vector_field(mu);
    return doc;
}

inline Json neumann_document(const NeumannData& data) {
    Json doc;
    doc["type"] = "neumann_data";
    Json boundary = Json::array();
    for (int b : data.boundary) boundary.push_back(b);
    doc["boundary"] = boundary;
    doc["fluxes"] = vector_field(data.fluxes);
    return doc;
}

inline Json run_build(const Json& input) {
    Json graph_doc = input.contains("builder_spec") ? input["builder_spec"]
                     : input.contains("graph")      ? input["graph"]
                                                    : input;
    const WeightedGraph g = graph_from_document(graph_doc);
    Json output = to_document(g);
    output["first_betti"] = first_betti(g);
    output["total_measure"] = g.total_measure();
    return output;
}

inline std::string plot_row_end() { return "\n"; }

inline Json run_hodge(const Json& input, double tolerance, std::string& edges_table,
                      std::string& vertices_table) {
    const WeightedGraph g = graph_from_document(require_field(input, "graph", "hodge input"));
    const OneForm v = form_from_document(require_field(input, "form", "hodge input"), g);
    const HodgeSplit split = hodge_decompose(g, v);

    const double scale = std::max(1.0, form_norm(g, v));
    const double reconstruction =
        form_norm(g, v - split.exact - split.harmonic) / scale;
    const double orthogonality =
        std::abs(inner(g, split.exact, split.harmonic)) / (scale * scale);
    const int harmonic_dimension = g.edge_count() - svd_rank(codifferential_matrix(g));

    Json output;
    output["type"] = "hodge_result";
    output["form"] = form_document(v);
    output["exact"] = form_document(split.exact);
    output["harmonic"] = form_document(split.harmonic);
    output["potential"] = function_document(split.potential);
    output["reconstruction_residual"] = reconstruction;
    output["orthogonality_residual"] = orthogonality;
    output["harmonic_dimension"] = harmonic_dimension;
    output["within_tolerance"] =
        reconstruction <= tolerance && orthogonality <= tolerance;

    edges_table = "edge\ttail\thead\tconductance\tform\texact\tharmonic\n";
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        edges_table += std::to_string(e) + "\t" + std::to_string(ed.tail) + "\t" +
                       std::to_string(ed.head) + "\t" + number_repr(ed.conductance) + "\t" +
                       number_repr(v[e]) + "\t" + number_repr(split.exact[e]) + "\t" +
                       number_repr(split.harmonic[e]) + plot_row_end();
    }
    vertices_table = "vertex\tmeasure\tpotential\n";
    for (int x = 0; x < g.vertex_count(); ++x) {
        vertices_table += std::to_string(x) + "\t" + number_repr(g.vertex_measure()[x]) + "\t" +
                          number_repr(split.potential[x]) + plot_row_end();
    }
    return output;
}

inline Json run_cech(const Json& input) {
    const WeightedGraph g = graph_from_document(require_field(input, "graph", "cech input"));
    Cover cover;
    Json cover_info;
    if (input.contains("cover")) {
        cover = cover_from_document(input["cover"]);
    } else {
        const GoodCover built = good_cover(g);
        cover = built.cover;
        cover_info["method"] = built.method;
    }
    validate_cover(g, cover);
    const Nerve n = nerve(g, cover);
    const CorrespondenceReport report = correspondence_check(g, cover);

    Json output;
    output["type"] = "cech_result";
    output["cover"] = to_document(cover);
    if (!cover_info.empty()) output["cover_construction"] = cover_info;
    Json nerve_doc;
    nerve_doc["zero_simplices"] = n.label_count;
    nerve_doc["one_simplices"] = static_cast<int>(n.one_simplices.size());
    nerve_doc["two_simplices"] = static_cast<int>(n.two_simplices.size());
    output["nerve"] = nerve_doc;
    output["h1_dimension"] = report.cech_h1;
    Json corr;
    corr["harmonic_dimension"] = report.harmonic_dimension;
    corr["cech_h1"] = report.cech_h1;
    corr["harmonic_nontrivial"] = report.harmonic_nontrivial;
    corr["cech_nontrivial"] = report.cech_nontrivial;
    corr["agree"] = report.agree;
    corr["cover_triple_free"] = report.cover_triple_free;
    corr["separating_sets_positive"] = report.separating_sets_positive;
    corr["min_separating_capacity"] = report.min_separating_capacity;
    if (!report.note.empty()) corr["note"] = report.note;
    output["correspondence"] = corr;
    return output;
}

inline Json run_capacity(const Json& input) {
    const WeightedGraph g = graph_from_document(require_field(input, "graph", "capacity input"));
    const std::vector<int> target =
        as_int_list(require_field(input, "target", "capacity input"), "capacity target");
    Json output;
    output["type"] = "capacity_result";
    Json t = Json::array();
    for (int v : target) t.push_back(v);
    output["target"] = t;
    output["capacity"] = capacity(g, target);
    output["total_measure"] = g.total_measure();
    return output;
}

inline Json run_neumann(const Json& input) {
    const WeightedGraph g = graph_from_document(require_field(input, "graph", "neumann input"));
    const NeumannData data =
        neumann_from_document(require_field(input, "neumann_data", "neumann input"));
    const GraphFunction h = solve_neumann(g, data);

    double flux_residual_max = 0.0;
    for (size_t i = 0; i < data.boundary.size(); ++i)
        flux_residual_max =
            std::max(flux_residual_max,
                     std::abs(neumann_derivative(g, h, data.boundary[i]) -
                              data.fluxes[static_cast<Eigen::Index>(i)]));
    double gauss_green = 0.0;
    for (int p : data.boundary) gauss_green += neumann_derivative(g, h, p);

    Json output;
    output["type"] = "neumann_result";
    output["neumann_data"] = neumann_document(data);
    output["solution"] = function_document(h);
    output["flux_residual_max"] = flux_residual_max;
    output["gauss_green_sum"] = gauss_green;
    output["weighted_mean"] = h.dot(g.vertex_measure());
    return output;
}

inline std::vector<double> parse_times(const Json& input) {
    if (input.contains("times")) {
        const Eigen::VectorXd t = as_vector(input["times"], "ns times");
        return std::vector<double>(t.data(), t.data() + t.size());
    }
    std::vector<double> times;
    for (int k = 1; k <= 10; ++k) times.push_back(0.1 * k);
    return times;
}

inline Json run_ns(const Json& input, double tolerance, std::string& edges_table,
                   std::string& vertices_table) {
    const WeightedGraph g = graph_from_document(require_field(input, "graph", "ns input"));
    const double viscosity =
        input.contains("viscosity") ? as_double(input["viscosity"], "ns viscosity") : 1.0;

    NsSolution sol{OneForm(), VertexMeasure(), viscosity, std::nullopt};
    Json output;
    output["type"] = "ns_result";

    if (input.contains("neumann_data")) {
        const NeumannData data = neumann_from_document(input["neumann_data"]);
        sol = solve_ns_boundary(g, data, viscosity);

        // residual checks appropriate to the boundary problem
        const GraphFunction h = solve_neumann(g, data);
        double flux_residual_max = 0.0;
        for (size_t i = 0; i < data.boundary.size(); ++i)
            flux_residual_max =
                std::max(flux_residual_max,
                         std::abs(neumann_derivative(g, h, data.boundary[i]) -
                                  data.fluxes[static_cast<Eigen::Index>(i)]));
        double orthogonality = 0.0;
        std::vector<char> on_boundary(static_cast<size_t>(g.vertex_count()), 0);
        for (int p : data.boundary) on_boundary[static_cast<size_t>(p)] = 1;
        for (int x = 0; x < g.vertex_count(); ++x) {
            if (on_boundary[static_cast<size_t>(x)]) continue;
            GraphFunction psi = GraphFunction::Zero(g.vertex_count());
            psi[x] = 1.0;
            orthogonality =
                std::max(orthogonality, std::abs(inner(g, sol.velocity, derivation(g, psi))));
        }
        Json report;
        report["flux_residual_max"] = flux_residual_max;
        report["interior_orthogonality_max"] = orthogonality;
        report["pass"] = flux_residual_max <= tolerance * 1e2 && orthogonality <= tolerance;
        output["boundary_report"] = report;
    } else {
        const OneForm initial =
            form_from_document(require_field(input, "initial", "ns input"), g);
        sol = solve_ns_free(g, initial, viscosity, tolerance);

        const std::vector<double> times = parse_times(input);
        const std::vector<OneForm> basis = harmonic_basis(g);
        const WeakSolutionReport report = verify_weak_solution(g, sol, basis, times, tolerance);
        Json rep;
        rep["velocity_divergence"] = report.velocity_divergence;
        rep["velocity_admissible"] = report.velocity_admissible;
        rep["max_residual"] = report.max_residual;
        rep["pass"] = report.pass;
        Json t = Json::array();
        for (double x : report.times) t.push_back(x);
        rep["times"] = t;
        rep["test_form_count"] = static_cast<int>(basis.size());
        output["weak_solution_report"] = rep;
    }

    output["velocity"] = form_document(sol.velocity);
    output["pressure"] = measure_document(sol.pressure);
    output["viscosity"] = sol.viscosity;
    if (sol.boundary) output["neumann_data"] = neumann_document(*sol.boundary);

    edges_table = "edge\ttail\thead\tconductance\tvelocity\n";
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        edges_table += std::to_string(e) + "\t" + std::to_string(ed.tail) + "\t" +
                       std::to_string(ed.head) + "\t" + number_repr(ed.conductance) + "\t" +
                       number_repr(sol.velocity[e]) + plot_row_end();
    }
    vertices_table = "vertex\tmeasure\tpressure\n";
    for (int x = 0; x < g.vertex_count(); ++x) {
        vertices_table += std::to_string(x) + "\t" + number_repr(g.vertex_measure()[x]) + "\t" +
                          number_repr(sol.pressure[x]) + plot_row_end();
    }
    return output;
}

/// One named identity check over randomized trials.
struct IdentityCheck {
    std::string name;
    int trials = 0;
    double max_residual = 0.0;
    bool pass = true;

    void record(double residual) {
        ++trials;
        max_residual = std::max(max_residual, std::abs(residual));
    }
    void finish(double tolerance) { pass = max_residual <= tolerance; }
};

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

inline std::vector<WeightedGraph> verify_corpus(std::mt19937_64& rng) {
    std::vector<WeightedGraph> corpus;
    corpus.push_back(build({GraphFamily::cycle, 4}));
    corpus.push_back(build({GraphFamily::cycle, 7}));
    corpus.push_back(build({GraphFamily::path, 6}));
    corpus.push_back(build({GraphFamily::tree, 10, {}, 2}));
    corpus.push_back(build({GraphFamily::sierpinski_gasket, 1}));
    corpus.push_back(build({GraphFamily::sierpinski_gasket, 2}));
    corpus.push_back(build({GraphFamily::ladder, 5}));
    {
        BuilderSpec spec;
        spec.family = GraphFamily::metric_graph;
        spec.metric_graph_edges = {{0, 1, 0.5}, {1, 2, 2.0}, {2, 0, 1.0}, {1, 3, 1.0}};
        corpus.push_back(build(spec));
    }
    // a few random graphs: a random spanning tree plus random chords
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    for (int extra : {0, 2, 4}) {
        const int n = 8;
        std::vector<Edge> edges;
        std::set<std::pair<int, int>> used;
        for (int v = 1; v < n; ++v) {
            std::uniform_int_distribution<int> pick(0, v - 1);
            const int p = pick(rng);
            used.insert({p, v});
            edges.push_back({p, v, weight(rng)});
        }
        std::uniform_int_distribution<int> pick(0, n - 1);
        int added = 0;
        while (added < extra) {
            int a = pick(rng), b = pick(rng);
            if (a == b) continue;
            if (!used.insert({std::min(a, b), std::max(a, b)}).second) continue;
            edges.push_back({std::min(a, b), std::max(a, b), weight(rng)});
            ++added;
        }
        Eigen::VectorXd measure(n);
        for (int v = 0; v < n; ++v) measure[v] = weight(rng);
        corpus.push_back(WeightedGraph(n, std::move(edges), std::move(measure)));
    }
    return corpus;
}

inline Json run_verify(const Json& input, double tolerance, std::uint64_t seed,
                       bool& verify_failed) {
    std::mt19937_64 rng(seed);
    std::vector<WeightedGraph> corpus;
    if (input.contains("graph")) {
        corpus.push_back(graph_from_document(input["graph"]));
    } else {
        corpus = verify_corpus(rng);
    }

    IdentityCheck energy_identity{"energy_identity"};
    IdentityCheck adjointness{"codifferential_adjointness"};
    IdentityCheck leibniz{"leibniz_rule"};
    IdentityCheck self_adjoint{"form_laplacian_self_adjoint"};
    IdentityCheck reconstruction{"hodge_reconstruction"};
    IdentityCheck orthogonality{"hodge_orthogonality"};
    IdentityCheck idempotence{"hodge_idempotence"};
    IdentityCheck harmonic_div{"harmonic_basis_divergence"};
    IdentityCheck harmonic_dim{"harmonic_basis_dimension"};
    IdentityCheck product_rule{"energy_measure_product_rule"};
    IdentityCheck measure_mass{"form_measure_mass"};
    IdentityCheck measure_derivation{"measure_derivation_on_harmonic"};
    IdentityCheck max_principle{"maximum_principle"};
    IdentityCheck gauss_green{"gauss_green_sum"};

    for (const WeightedGraph& g : corpus) {
        const std::vector<OneForm> basis = harmonic_basis(g);
        harmonic_dim.record(static_cast<int>(basis.size()) != first_betti(g) ? 1.0 : 0.0);
        for (const OneForm& h : basis)
            harmonic_div.record(codifferential(g, h).lpNorm<Eigen::Infinity>());

        for (int trial = 0; trial < 20; ++trial) {
            const GraphFunction f = random_function(g, rng);
            const GraphFunction h = random_function(g, rng);
            const GraphFunction phi = random_function(g, rng);
            const OneForm u = random_form(g, rng);
            const OneForm w = random_form(g, rng);

            const double e = energy(g, f);
            const OneForm df = derivation(g, f);
            energy_identity.record((inner(g, df, df) - e) / std::max(1.0, std::abs(e)));

            const double pairing =
                f.dot(g.vertex_measure().asDiagonal() * codifferential(g, u));
            adjointness.record((pairing + inner(g, df, u)) /
                               std::max(1.0, std::abs(pairing)));

            const OneForm lhs = derivation(g, f.cwiseProduct(h));
            const OneForm rhs = module_action(g, f, derivation(g, h)) +
                                module_action(g, h, derivation(g, f));
            leibniz.record((lhs - rhs).lpNorm<Eigen::Infinity>());

            const double sa = inner(g, hodge_laplacian(g, u), w) -
                              inner(g, u, hodge_laplacian(g, w));
            self_adjoint.record(sa / std::max(1.0, std::abs(inner(g, u, w))));

            const HodgeSplit split = hodge_decompose(g, u);
            const double u_scale = std::max(1.0, form_norm(g, u));
            reconstruction.record(form_norm(g, u - split.exact - split.harmonic) / u_scale);
            orthogonality.record(inner(g, split.exact, split.harmonic) / (u_scale * u_scale));
            const HodgeSplit again = hodge_decompose(g, split.harmonic);
            idempotence.record((again.harmonic - split.harmonic).lpNorm<Eigen::Infinity>() +
                               again.exact.lpNorm<Eigen::Infinity>());

            const double pr = 2.0 * phi.dot(energy_measure(g, f, h)) -
                              (energy(g, phi.cwiseProduct(f), h) +
                               energy(g, phi.cwiseProduct(h), f) -
                               energy(g, f.cwiseProduct(h), phi));
            product_rule.record(pr / std::max(1.0, std::abs(energy(g, f, h))));

            measure_mass.record((form_energy_measure(g, u).sum() - inner(g, u, u)) /
                                std::max(1.0, inner(g, u, u)));

            for (const OneForm& hb : basis)
                measure_derivation.record(form_energy_measure_derivation(g, u, hb));

            if (g.vertex_count() >= 3) {
                BoundaryData data;
                data.boundary = {0, g.vertex_count() - 1};
                std::uniform_real_distribution<double> value(-3.0, 3.0);
                data.values = Eigen::Vector2d(value(rng), value(rng));
                const GraphFunction ext = harmonic_extension(g, data);
                const double lo = data.values.minCoeff(), hi = data.values.maxCoeff();
                max_principle.record(std::max(0.0, ext.maxCoeff() - hi) +
                                     std::max(0.0, lo - ext.minCoeff()));
                double total = 0.0;
                for (int p : data.boundary) total += neumann_derivative(g, ext, p);
                gauss_green.record(total / std::max(1.0, std::abs(hi - lo)));
            }
        }
    }

    Json output;
    output["type"] = "verification_report";
    output["seed"] = seed;
    output["tolerance"] = tolerance;
    Json checks = Json::array();
    bool all_pass = true;
    for (IdentityCheck* check :
         {&energy_identity, &adjointness, &leibniz, &self_adjoint, &reconstruction,
          &orthogonality, &idempotence, &harmonic_div, &harmonic_dim, &product_rule,
          &measure_mass, &measure_derivation, &max_principle, &gauss_green}) {
        check->finish(tolerance);
        Json c;
        c["name"] = check->name;
        c["trials"] = check->trials;
        c["max_residual"] = check->max_residual;
        c["pass"] = check->pass;
        checks.push_back(c);
        all_pass = all_pass && check->pass;
    }
    output["checks"] = checks;
    output["pass"] = all_pass;
    verify_failed = !all_pass;
    return output;
}

} // namespace detail

/**
 * Execute one command against an input document and write the result
 * document (plus plot tables for `hodge` and `ns`).  Returns the process
 * exit status: 0 success, 2 parse error, 3 precondition violation,
 * 4 solvability violation, 5 verification failure.
 */
inline int run(const RunConfig& config) {
    try {
        const double tolerance = config.tolerance.value_or(1e-10);
        if (config.tolerance && *config.tolerance <= 0.0)
            throw PreconditionError("tolerance must be positive");
        const Json input = load_document(config.input_path);

        Json output;
        std::string edges_table, vertices_table;
        bool verify_failed = false;

        if (config.command == "build") {
            output = detail::run_build(input);
        } else if (config.command == "hodge") {
            output = detail::run_hodge(input, tolerance, edges_table, vertices_table);
        } else if (config.command == "cech") {
            output = detail::run_cech(input);
        } else if (config.command == "capacity") {
            output = detail::run_capacity(input);
        } else if (config.command == "neumann") {
            output = detail::run_neumann(input);
        } else if (config.command == "ns") {
            output = detail::run_ns(input, tolerance, edges_table, vertices_table);
        } else if (config.command == "verify") {
            output = detail::run_verify(input, tolerance, config.seed.value_or(0), verify_failed);
        } else {
            throw PreconditionError("unknown command: " + config.command);
        }

        store_text(config.output_path, dump_document(output));
        if (!edges_table.empty()) store_text(config.output_path + ".edges.tsv", edges_table);
        if (!vertices_table.empty())
            store_text(config.output_path + ".vertices.tsv", vertices_table);
        if (verify_failed) {
            std::cerr << "verification failed; see " << config.output_path << "\n";
            return 5;
        }
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const SolvabilityError& e) {
        std::cerr << "solvability error: " << e.what() << "\n";
        return 4;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace graphforms

#endif
