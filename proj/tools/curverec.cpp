#include <iostream>

#include <CLI11.hpp>

#include "curverec/cli.hpp"

int main(int argc, char** argv) {
    using namespace curverec;
    CLI::App app{"Rigid curve reconstruction from orthographic multiframe images"};
    app.require_subcommand(1);

    RunConfig config;
    std::string method = "nonlinear";

    const auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", config.seed, "Random seed"); };
    const auto add_out = [&](CLI::App* sub, const char* what) { sub->add_option("--out", config.output, what); };
    const auto add_in = [&](CLI::App* sub, const char* what) {
        sub->add_option("--in", config.inputs, what)->required()->check(CLI::ExistingFile);
    };

    CLI::App* gen = app.add_subcommand("gen", "Generate scene.json, frames.json and views.json");
    add_seed(gen);
    gen->add_option("--frames", config.frames, "Number of frames")->check(CLI::PositiveNumber);
    gen->add_option("--samples", config.samples, "Samples per curve");
    gen->add_option("--noise", config.noise_sigma, "Gaussian noise sigma on image coordinates and tangent angles");
    gen->add_flag("!--canonical", config.nuisance, "Skip the in-plane nuisance motion");
    add_out(gen, "Output directory");

    CLI::App* observe = app.add_subcommand("observe", "Extract observables from frames.json");
    add_in(observe, "frames.json");
    add_out(observe, "obs.json");

    CLI::App* solve = app.add_subcommand("solve", "Recover curve invariants and poses from obs.json");
    add_in(solve, "obs.json");
    add_out(solve, "solution.json");
    solve->add_option("--tol", config.tol, "Residual tolerance");
    solve->add_option("--noise", config.noise_sigma, "Expected noise sigma; raises the tolerance");
    solve->add_option("--method", method, "nonlinear or linearized")
        ->check(CLI::IsMember({"nonlinear", "linearized"}));

    CLI::App* densify = app.add_subcommand("densify", "Reconstruct 3D curve points");
    add_in(densify, "frames.json then solution.json");
    add_out(densify, "curve3d.json");

    CLI::App* correspond = app.add_subcommand("correspond", "Match curve points between two perspective views");
    add_in(correspond, "views.json");
    add_out(correspond, "pairs.json");

    CLI::App* plot = app.add_subcommand("plot", "Write SVG plots of frames.json or curve3d.json");
    add_in(plot, "frames.json or curve3d.json");
    add_out(plot, "Output directory");

    CLI::App* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    add_seed(selftest);
    selftest->add_option("--fixture", config.noise_fixture, "Noise regression fixture");
    add_out(selftest, "Directory for JSON artifacts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: usage: " << e.what() << "\n";
        return 1;
    }

    config.command = command_from_string(app.get_subcommands().front()->get_name());
    config.method = method_from_string(method);
    return run(config, std::cout, std::cerr);
}
