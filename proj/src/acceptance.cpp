#include "curverec/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>

#include "curverec/densify.hpp"
#include "curverec/errors.hpp"
#include "curverec/observe.hpp"
#include "curverec/perspective.hpp"
#include "curverec/random.hpp"
#include "curverec/solver.hpp"

namespace curverec {

namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::uint64_t scene_seed(const AcceptanceOptions& opt, int criterion, int i) {
    return opt.seed * 100000 + static_cast<std::uint64_t>(criterion) * 1000 + static_cast<std::uint64_t>(i);
}

double param_error(const CurveParams& a, const CurveParams& b) {
    return std::max({std::abs(a.c - b.c), std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta),
                     std::abs(fold_angle(a.phi - b.phi))});
}

CriterionResult timed(int id, const char* name, double time_limit, const std::function<void(CriterionResult&)>& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("unexpected error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit > 0.0 && r.seconds > time_limit) {
        r.passed = false;
        r.detail += " runtime above " + sci(time_limit) + " s";
    }
    return r;
}

struct SolvedScene {
    Scene scene;
    std::vector<FrameObservation> obs;
    SolveReport report;
    bool converged = false;
};

SolvedScene solve_scene(std::uint64_t seed, int frames, double noise = 0.0) {
    SolvedScene s;
    s.scene = make_scene(seed, frames, true);
    s.obs = observe_frames(render_scene(s.scene, noise));
    SolverConfig cfg;
    cfg.noise_sigma = noise;
    try {
        s.report = solve_global(s.obs, cfg);
        s.converged = true;
    } catch (const NoConvergenceError& e) {
        s.report = e.best();
    }
    return s;
}

// x -> H x in homogeneous coordinates.
Vec2 apply_homography(const Mat3& H, const Vec2& p) {
    const Vec3 q = H * Vec3(p.x(), p.y(), 1.0);
    return {q.x() / q.z(), q.y() / q.z()};
}

}  // namespace

CriterionResult check_derivation(const AcceptanceOptions& opt) {
    return timed(1, "derivation consistency", 5.0, [&](CriterionResult& r) {
        Rng rng(scene_seed(opt, 1, 0));
        double worst = 0.0;
        constexpr int cases = 1000;
        for (int i = 0; i < cases; ++i) {
            const CurveParams p = random_params(rng);
            const Curve3 curve = make_test_curve(scene_seed(opt, 1, i), p);
            const double delta = rng.uniform(0.05, kPi - 0.05);
            const double tau = rng.uniform(0.05, kPi / 2 - 0.05);
            worst = std::max(worst, derivation_trace(curve, delta, tau).max_relation_error());
        }
        r.passed = worst <= 1e-9;
        r.metrics = {{"cases", cases}, {"worst_relation_error", worst}};
        r.detail = "worst relation error " + sci(worst) + " (tol 1e-9) over " + std::to_string(cases) + " cases";
    });
}

CriterionResult check_residual_at_truth(const AcceptanceOptions& opt) {
    return timed(2, "residual at truth", 5.0, [&](CriterionResult& r) {
        double w8 = 0.0;
        double w12 = 0.0;
        double wq = 0.0;
        int frames = 0;
        for (int i = 0; frames < 1000; ++i) {
            const Scene scene = make_scene(scene_seed(opt, 2, i), 10, true);
            const std::vector<FrameObservation> obs = observe_frames(render_scene(scene));
            for (std::size_t k = 0; k < obs.size() && frames < 1000; ++k, ++frames) {
                const auto [rb, ra] = residual_eq8(obs[k], scene.params, scene.motion.frames[k].delta);
                w8 = std::max({w8, std::abs(rb), std::abs(ra)});
                w12 = std::max(w12, std::abs(residual_eq12(obs[k], scene.params)));
                wq = std::max(wq, std::abs(residual_quasi_poly(obs[k], scene.params)));
            }
        }
        r.passed = w8 <= 1e-9 && w12 <= 1e-8 && wq <= 1e-7;
        r.metrics = {{"frames", frames}, {"residual_eq8", w8}, {"residual_eq12", w12}, {"quasi_poly_relative", wq}};
        r.detail = "residual_eq8 " + sci(w8) + " (1e-9), residual_eq12 " + sci(w12) + " (1e-8), quasi-poly " + sci(wq) + " (1e-7)";
    });
}

CriterionResult check_global_solve(const AcceptanceOptions& opt) {
    return timed(3, "global solve round-trip", 60.0, [&](CriterionResult& r) {
        double worst = 0.0;
        double worst_rms = 0.0;
        int failures = 0;
        constexpr int scenes = 50;
        for (int i = 0; i < scenes; ++i) {
            const SolvedScene s = solve_scene(scene_seed(opt, 3, i), 6);
            const double e = param_error(s.report.params, s.scene.params);
            worst = std::max(worst, e);
            worst_rms = std::max(worst_rms, s.report.residual_rms);
            if (!s.converged || e > 1e-6 || s.report.residual_rms > 1e-9) ++failures;
        }
        r.passed = failures == 0;
        r.metrics = {{"scenes", scenes}, {"failures", failures}, {"worst_param_error", worst}, {"worst_rms", worst_rms}};
        r.detail = std::to_string(failures) + "/" + std::to_string(scenes) + " failures, worst param error " +
                   sci(worst) + " (1e-6), worst rms " + sci(worst_rms) + " (1e-9)";
    });
}

CriterionResult check_pose_recovery(const AcceptanceOptions& opt) {
    return timed(4, "pose recovery", 0.0, [&](CriterionResult& r) {
        double worst_delta = 0.0;
        double worst_tau = 0.0;
        int bad_branch = 0;
        int frames = 0;
        for (int i = 0; i < 50; ++i) {
            const SolvedScene s = solve_scene(scene_seed(opt, 3, i), 6);
            for (std::size_t k = 0; k < s.obs.size(); ++k, ++frames) {
                const FrameMotion& truth = s.scene.motion.frames[k];
                try {
                    const PoseRecovery pr = recover_frame_pose(s.obs[k], s.report.params);
                    if (pr.branches[0].passes + pr.branches[1].passes != 1) ++bad_branch;
                    worst_delta = std::max(worst_delta, std::abs(fold_angle(pr.pose.delta - truth.delta)));
                    worst_tau = std::max(worst_tau, std::abs(pr.pose.tau - truth.tau));
                } catch (const BranchConflictError&) {
                    ++bad_branch;
                }
            }
        }
        r.passed = bad_branch == 0 && worst_delta <= 1e-6 && worst_tau <= 1e-6;
        r.metrics = {{"frames", frames}, {"branch_failures", bad_branch}, {"worst_delta", worst_delta}, {"worst_tau", worst_tau}};
        r.detail = "worst delta " + sci(worst_delta) + ", worst tau " + sci(worst_tau) + " (1e-6), " +
                   std::to_string(bad_branch) + " frames without exactly one passing branch";
    });
}

CriterionResult check_linearization(const AcceptanceOptions& opt) {
    return timed(5, "linearization equivalence", 0.0, [&](CriterionResult& r) {
        const int frames = static_cast<int>(linear_monomials().size()) + 4;
        double worst = 0.0;
        int failures = 0;
        constexpr int scenes = 10;
        for (int i = 0; i < scenes; ++i) {
            const SolvedScene s = solve_scene(scene_seed(opt, 5, i), frames);
            try {
                const SolveReport lin = linearized_solve(s.obs);
                const double e = param_error(lin.params, s.report.params);
                worst = std::max(worst, e);
                if (!s.converged || e > 1e-4) ++failures;
            } catch (const Error&) {
                ++failures;
            }
        }
        // Every frame repeats one motion: the monomial rows coincide.
        bool rank_error = false;
        Scene flat = make_scene(scene_seed(opt, 5, 999), frames, false);
        for (FrameMotion& m : flat.motion.frames) m = flat.motion.frames.front();
        try {
            linearized_solve(observe_frames(render_scene(flat)));
        } catch (const RankDeficientError&) {
            rank_error = true;
        }
        r.passed = failures == 0 && rank_error;
        r.metrics = {{"frames", frames}, {"scenes", scenes}, {"failures", failures}, {"worst_param_gap", worst},
                     {"rank_deficient_raised", rank_error}};
        r.detail = "frames " + std::to_string(frames) + ", worst gap to global solve " + sci(worst) + " (1e-4), " +
                   std::to_string(failures) + " failures, RankDeficientError " + (rank_error ? "raised" : "missing");
    });
}

CriterionResult check_densification(const AcceptanceOptions& opt) {
    return timed(6, "densification", 30.0, [&](CriterionResult& r) {
        double worst = 0.0;
        int failures = 0;
        constexpr int scenes = 20;
        for (int i = 0; i < scenes; ++i) {
            const Scene scene = make_scene(scene_seed(opt, 6, i), 2, true, 64);
            const std::vector<FrameImage> images = render_scene(scene);
            SolveReport truth;
            truth.params = scene.params;
            for (std::size_t k = 0; k < images.size(); ++k) {
                const FrameObservation o = observe_frame(images[k], static_cast<int>(k));
                truth.per_frame.push_back(recover_frame_pose(o, scene.params).pose);
            }
            try {
                const ReconstructedCurve rc = reconstruct_from_solution(images, truth);
                const FrameMotion& m0 = scene.motion.frames[0];
                const Curve3 posed = apply_canonical_motion(scene.curve, m0.delta, m0.tau);
                double direct = 0.0;
                double mirrored = 0.0;
                for (std::size_t k = 0; k < rc.points.size(); ++k) {
                    const Vec3& p = rc.points[k];
                    direct = std::max(direct, (p - posed.samples[k]).norm());
                    mirrored = std::max(mirrored, (Vec3(p.x(), p.y(), -p.z()) - posed.samples[k]).norm());
                }
                const double e = std::min(direct, mirrored) / scene.params.c;
                worst = std::max(worst, e);
                if (e > 1e-5) ++failures;
            } catch (const Error&) {
                ++failures;
            }
        }
        int coplanar_raised = 0;
        for (double phi : {0.0, kPi}) {
            const Scene scene = make_scene(scene_seed(opt, 6, 900), 2, false, 64, CurveParams{1.0, 0.7, 0.5, phi});
            SolveReport sol;
            sol.params = scene.params;
            sol.per_frame = {FramePose{0.4, 0.5, Branch::plus, DepthSign::front, 0},
                             FramePose{1.2, 0.3, Branch::plus, DepthSign::front, 1}};
            try {
                reconstruct_from_solution(render_scene(scene), sol);
            } catch (const CoplanarError&) {
                ++coplanar_raised;
            }
        }
        r.passed = failures == 0 && coplanar_raised == 2;
        r.metrics = {{"scenes", scenes}, {"failures", failures}, {"worst_error_over_c", worst},
                     {"coplanar_raised", coplanar_raised}};
        r.detail = "worst point error / c " + sci(worst) + " (1e-5), " + std::to_string(failures) +
                   " failures, CoplanarError raised " + std::to_string(coplanar_raised) + "/2";
    });
}

CriterionResult check_cross_ratio(const AcceptanceOptions& opt) {
    return timed(7, "cross-ratio suite", 0.0, [&](CriterionResult& r) {
        Rng rng(scene_seed(opt, 7, 0));
        double worst_dq = 0.0;
        constexpr int cases = 1000;
        for (int i = 0; i < cases; ++i) {
            const Vec2 origin(rng.uniform(-1, 1), rng.uniform(-1, 1));
            const double ang = rng.uniform(0.0, kPi);
            const Vec2 dir(std::cos(ang), std::sin(ang));
            double t[4] = {0.0, rng.uniform(0.1, 0.9), rng.uniform(-0.5, 1.5), 1.0};
            while (std::abs(t[2]) < 0.05 || std::abs(t[2] - 1.0) < 0.05) t[2] = rng.uniform(-0.5, 1.5);
            Vec2 pts[4];
            for (int k = 0; k < 4; ++k) pts[k] = origin + t[k] * dir;
            // Homographies close enough to the identity that no point is sent
            // to infinity.
            Mat3 H = Mat3::Identity();
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) H(a, b) += rng.uniform(-0.3, 0.3);
            Vec2 img[4];
            bool finite = true;
            for (int k = 0; k < 4; ++k) {
                const double w = (H * Vec3(pts[k].x(), pts[k].y(), 1.0)).z();
                finite = finite && std::abs(w) > 0.1;
                img[k] = apply_homography(H, pts[k]);
            }
            if (!finite) {
                --i;
                continue;
            }
            const double q0 = double_quotient(pts[0], pts[1], pts[2], pts[3]);
            const double q1 = double_quotient(img[0], img[1], img[2], img[3]);
            worst_dq = std::max(worst_dq, std::abs(q1 - q0) / std::max(1.0, std::abs(q0)));
        }

        double worst_img = 0.0;
        double worst_rt = 0.0;
        int failures = 0;
        constexpr int scenes = 20;
        for (int i = 0; i < scenes; ++i) {
            const PlanarFixture f = make_planar_fixture(scene_seed(opt, 7, i));
            try {
                for (const CorrespondencePair& p : correspond_curve(f.view1, f.view2)) {
                    worst_img = std::max(worst_img, (p.x2 - f.view2.curve_image[p.index]).norm());
                    worst_rt = std::max(worst_rt, (correspond_point(p.x2, f.view2, f.view1) - p.x1).norm());
                }
            } catch (const Error&) {
                ++failures;
            }
        }
        r.passed = worst_dq <= 1e-9 && failures == 0 && worst_img <= 1e-5 && worst_rt <= 1e-7;
        r.metrics = {{"homography_cases", cases}, {"worst_quotient_change", worst_dq}, {"scenes", scenes},
                     {"failures", failures}, {"worst_image_error", worst_img}, {"worst_round_trip", worst_rt}};
        r.detail = "quotient change " + sci(worst_dq) + " (1e-9), image error " + sci(worst_img) +
                   " (1e-5), round trip " + sci(worst_rt) + " (1e-7)";
    });
}

Json noise_medians(std::uint64_t seed) {
    AcceptanceOptions opt;
    opt.seed = seed;
    const double sigmas[] = {1e-5, 1e-4, 1e-3};
    constexpr int scenes = 9;
    Json medians = Json::array();
    for (double sigma : sigmas) {
        std::vector<double> errors;
        for (int i = 0; i < scenes; ++i) {
            const SolvedScene s = solve_scene(scene_seed(opt, 8, i), 12, sigma);
            errors.push_back(param_error(s.report.params, s.scene.params));
        }
        std::sort(errors.begin(), errors.end());
        medians.push_back(errors[scenes / 2]);
    }
    return Json{{"v", kSchemaVersion}, {"seed", seed}, {"frames", 12}, {"scenes", scenes},
                {"sigmas", Json::array({sigmas[0], sigmas[1], sigmas[2]})}, {"medians", medians}};
}

CriterionResult check_noise(const AcceptanceOptions& opt) {
    return timed(8, "noise degradation", 0.0, [&](CriterionResult& r) {
        const Json result = noise_medians(opt.seed);
        const Json& m = result["medians"];
        const bool monotone = m[0].get<double>() <= m[1].get<double>() && m[1].get<double>() <= m[2].get<double>();
        std::string fixture_state = "no fixture";
        bool fixture_ok = true;
        if (!opt.noise_fixture.empty() && std::filesystem::exists(opt.noise_fixture)) {
            const Json fixture = read_json_file(opt.noise_fixture);
            if (fixture.value("seed", std::uint64_t{0}) != opt.seed) {
                fixture_state = "fixture for another seed";
            } else {
                const Json& f = fixture.at("medians");
                for (std::size_t k = 0; k < 3; ++k) {
                    const double a = f.at(k).get<double>();
                    const double b = m[k].get<double>();
                    fixture_ok = fixture_ok && std::abs(a - b) <= 1e-6 * std::max(std::abs(a), 1e-12);
                }
                fixture_state = fixture_ok ? "matches fixture" : "differs from fixture";
            }
        }
        r.passed = monotone && fixture_ok;
        r.metrics = result;
        r.detail = "medians " + sci(m[0].get<double>()) + ", " + sci(m[1].get<double>()) + ", " +
                   sci(m[2].get<double>()) + (monotone ? " non-decreasing, " : " not monotone, ") + fixture_state;
    });
}

std::map<std::string, std::string> pipeline_artifacts(std::uint64_t seed) {
    std::map<std::string, std::string> out;
    const Scene scene = make_scene(seed, 6, true);
    const std::vector<FrameImage> frames = render_scene(scene);
    const std::vector<FrameObservation> obs = observe_frames(frames);
    SolveReport report;
    try {
        report = solve_global(obs);
    } catch (const NoConvergenceError& e) {
        report = e.best();
    }
    out["scene.json"] = dump_json(scene_to_json(scene));
    out["frames.json"] = dump_json(frames_to_json(frames));
    out["obs.json"] = dump_json(observations_to_json(obs));
    out["solution.json"] = dump_json(solution_to_json(report));
    try {
        out["curve3d.json"] = dump_json(curve3d_to_json(reconstruct_from_solution(frames, report)));
    } catch (const Error& e) {
        out["curve3d.json"] = dump_json(Json{{"v", kSchemaVersion}, {"error", e.kind()}});
    }
    const PlanarFixture f = make_planar_fixture(seed);
    out["views.json"] = dump_json(views_to_json(f.view1, f.view2));
    out["pairs.json"] = dump_json(pairs_to_json(correspond_curve(f.view1, f.view2)));
    return out;
}

CriterionResult check_determinism(const AcceptanceOptions& opt) {
    return timed(9, "determinism", 0.0, [&](CriterionResult& r) {
        const auto first = pipeline_artifacts(opt.seed);
        const auto second = pipeline_artifacts(opt.seed);
        int differing = 0;
        for (const auto& [name, text] : first)
            if (second.at(name) != text) ++differing;
        r.passed = differing == 0 && first.size() == second.size();
        r.metrics = {{"artifacts", first.size()}, {"differing", differing}};
        r.detail = std::to_string(first.size()) + " artifacts, " + std::to_string(differing) + " differ between runs";
    });
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    return {check_derivation(opt),   check_residual_at_truth(opt), check_global_solve(opt),
            check_pose_recovery(opt), check_linearization(opt),     check_densification(opt),
            check_cross_ratio(opt),  check_noise(opt),             check_determinism(opt)};
}

std::string format_result(const CriterionResult& r) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s  %d  %-27s ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
    char time[32];
    std::snprintf(time, sizeof time, "  [%.2f s]", r.seconds);
    return buf + r.detail + time;
}

Json acceptance_to_json(const std::vector<CriterionResult>& results) {
    Json list = Json::array();
    bool all = true;
    for (const CriterionResult& r : results) {
        list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"metrics", r.metrics}});
        all = all && r.passed;
    }
    return Json{{"v", kSchemaVersion}, {"all_passed", all}, {"criteria", list}};
}

}  // namespace curverec
