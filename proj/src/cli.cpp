#include "curverec/cli.hpp"

#include <filesystem>
#include <ostream>

#include "curverec/acceptance.hpp"
#include "curverec/densify.hpp"
#include "curverec/errors.hpp"
#include "curverec/io.hpp"
#include "curverec/observe.hpp"
#include "curverec/perspective.hpp"
#include "curverec/svg.hpp"

namespace curverec {

namespace {

namespace fs = std::filesystem;

const char* const kCommandNames[] = {"gen", "observe", "solve", "densify", "correspond", "plot", "selftest"};

std::string output_dir(const RunConfig& config) {
    const std::string dir = config.output.empty() ? "." : config.output;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw FormatError("cannot create directory '" + dir + "'");
    return dir;
}

const std::string& output_file(const RunConfig& config) {
    if (config.output.empty()) throw PreconditionError(std::string(to_string(config.command)) + " needs --out");
    return config.output;
}

void need_inputs(const RunConfig& config, std::size_t n) {
    if (config.inputs.size() != n)
        throw PreconditionError(std::string(to_string(config.command)) + " expects " + std::to_string(n) +
                                " input file" + (n == 1 ? "" : "s"));
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

int gen(const RunConfig& config, std::ostream& out) {
    const std::string dir = output_dir(config);
    const Scene scene = make_scene(config.seed, config.frames, config.nuisance, config.samples);
    write_json_file(join(dir, "scene.json"), scene_to_json(scene));
    write_json_file(join(dir, "frames.json"), frames_to_json(render_scene(scene, config.noise_sigma)));
    const PlanarFixture f = make_planar_fixture(config.seed, config.samples);
    write_json_file(join(dir, "views.json"), views_to_json(f.view1, f.view2));
    out << "wrote scene.json, frames.json, views.json to " << dir << "\n";
    return 0;
}

int observe(const RunConfig& config, std::ostream& out) {
    need_inputs(config, 1);
    const std::vector<FrameImage> frames = frames_from_json(read_json_file(config.inputs[0]));
    write_json_file(output_file(config), observations_to_json(observe_frames(frames)));
    out << "observed " << frames.size() << " frames\n";
    return 0;
}

int solve_cmd(const RunConfig& config, std::ostream& out, std::ostream& err) {
    need_inputs(config, 1);
    const std::vector<FrameObservation> obs = observations_from_json(read_json_file(config.inputs[0]));
    const std::string& path = output_file(config);
    SolverConfig sc;
    sc.tol = config.tol;
    sc.noise_sigma = config.noise_sigma;
    try {
        const SolveReport report = solve(obs, config.method, sc);
        write_json_file(path, solution_to_json(report));
        out << "solved: residual_rms " << report.residual_rms << "\n";
        return 0;
    } catch (const NoConvergenceError& e) {
        write_json_file(path, solution_to_json(e.best()));
        err << "error: " << e.kind() << ": " << e.what() << " (best residual_rms " << e.best().residual_rms << ")\n";
        return 2;
    }
}

int densify(const RunConfig& config, std::ostream& out) {
    need_inputs(config, 2);
    const std::vector<FrameImage> frames = frames_from_json(read_json_file(config.inputs[0]));
    const SolveReport solution = solution_from_json(read_json_file(config.inputs[1]));
    const ReconstructedCurve curve = reconstruct_from_solution(frames, solution);
    write_json_file(output_file(config), curve3d_to_json(curve));
    out << "reconstructed " << curve.points.size() << " points, mirror " << to_string(curve.mirror_flag) << "\n";
    return 0;
}

int correspond(const RunConfig& config, std::ostream& out) {
    need_inputs(config, 1);
    const auto [view1, view2] = views_from_json(read_json_file(config.inputs[0]));
    const std::vector<CorrespondencePair> pairs = correspond_curve(view1, view2);
    write_json_file(output_file(config), pairs_to_json(pairs));
    out << "matched " << pairs.size() << " points\n";
    return 0;
}

int plot(const RunConfig& config, std::ostream& out) {
    need_inputs(config, 1);
    const Json j = read_json_file(config.inputs[0]);
    const std::string dir = output_dir(config);
    if (j.contains("frames")) {
        const std::vector<FrameImage> frames = frames_from_json(j);
        for (std::size_t i = 0; i < frames.size(); ++i)
            write_text_file(join(dir, "frame_" + std::to_string(i) + ".svg"), frame_svg(frames[i], static_cast<int>(i)));
        out << "wrote " << frames.size() << " frame plots to " << dir << "\n";
    } else if (j.contains("points")) {
        write_text_file(join(dir, "curve3d.svg"), reconstruction_svg(curve3d_from_json(j)));
        out << "wrote curve3d.svg to " << dir << "\n";
    } else {
        throw FormatError("plot expects frames.json or curve3d.json");
    }
    return 0;
}

int selftest(const RunConfig& config, std::ostream& out) {
    AcceptanceOptions opt;
    opt.seed = config.seed;
    opt.noise_fixture = config.noise_fixture;
    const std::vector<CriterionResult> results = run_acceptance(opt);
    int failed = 0;
    for (const CriterionResult& r : results) {
        out << format_result(r) << "\n" << std::flush;
        if (!r.passed) ++failed;
    }
    out << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    if (!config.output.empty()) {
        const std::string dir = output_dir(config);
        for (const auto& [name, text] : pipeline_artifacts(config.seed)) write_text_file(join(dir, name), text);
        write_json_file(join(dir, "acceptance.json"), acceptance_to_json(results));
    }
    return failed == 0 ? 0 : 1;
}

}  // namespace

const char* to_string(Command c) { return kCommandNames[static_cast<int>(c)]; }

Command command_from_string(const std::string& s) {
    for (int i = 0; i < 7; ++i)
        if (s == kCommandNames[i]) return static_cast<Command>(i);
    throw RangeError("unknown command '" + s + "'");
}

void validate(const RunConfig& config) {
    if (config.frames < 1) throw RangeError("frames must be at least 1");
    if (!(config.noise_sigma >= 0.0)) throw RangeError("noise must be non-negative");
    if (!(config.tol > 0.0)) throw RangeError("tol must be positive");
    if (config.samples < 8) throw RangeError("samples must be at least 8");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
        switch (config.command) {
            case Command::gen: return gen(config, out);
            case Command::observe: return observe(config, out);
            case Command::solve: return solve_cmd(config, out, err);
            case Command::densify: return densify(config, out);
            case Command::correspond: return correspond(config, out);
            case Command::plot: return plot(config, out);
            case Command::selftest: return selftest(config, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "error: format: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace curverec
