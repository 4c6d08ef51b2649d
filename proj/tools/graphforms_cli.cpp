// Command line front end: parse flags, hand off to graphforms::run.

#include <CLI11.hpp>
#include <graphforms/graphforms.hpp>

int main(int argc, char** argv) {
    CLI::App app{"discrete Dirichlet forms, Hodge theory, and cover cohomology"};

    graphforms::RunConfig config;
    double tolerance = 0.0;
    std::uint64_t seed = 0;

    app.add_option("--command", config.command,
                   "one of: build, hodge, cech, capacity, neumann, ns, verify")
        ->required();
    app.add_option("--input", config.input_path, "input document path")->required();
    app.add_option("--output", config.output_path, "output document path")->required();
    auto* tol_opt = app.add_option("--tolerance", tolerance, "residual tolerance (default 1e-10)");
    auto* seed_opt = app.add_option("--seed", seed, "random seed for verify (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (tol_opt->count() > 0) config.tolerance = tolerance;
    if (seed_opt->count() > 0) config.seed = seed;
    return graphforms::run(config);
}
