#include "curverec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace curverec {

namespace {

constexpr double kPi = std::numbers::pi;

AuxTerms aux_unchecked(const FrameObservation& obs, const CurveParams& p) {
    const double ratio = obs.c_prime / p.c;
    const double k = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
    const double ta = std::tan(p.alpha);
    const double tb = std::tan(p.beta);
    AuxTerms a;
    a.q1 = obs.c_prime * p.c * ta;
    a.p1 = obs.d_prime * p.c * ta * k;
    a.q2 = obs.c_prime * p.c * tb;
    a.p2 = obs.e_prime * p.c * tb * k;
    a.omega1 = std::atan2(a.p1, a.q1);
    a.omega2 = std::atan2(a.p2, a.q2);
    return a;
}

void check_frame(const FrameObservation& obs, const CurveParams& p) {
    if (!(p.alpha > 0.0 && p.alpha < kPi / 2 && p.beta > 0.0 && p.beta < kPi / 2))
        throw RangeError("alpha and beta must lie in (0, pi/2)");
    if (!(obs.c_prime > 0.0)) throw RangeError("c' must be positive");
    if (!(p.c > obs.c_prime)) throw RangeError("c must exceed c'");
}

double clamp_checked(double u) {
    if (std::abs(u) > 1.0 + kArccosSlack) throw DomainError("arccos argument outside [-1, 1]");
    return std::clamp(u, -1.0, 1.0);
}

double branch_min(double a1, double a2, double delta_sum) {
    double best = std::numeric_limits<double>::infinity();
    for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
            const double r = fold_angle(s2 * a2 - s1 * a1 - delta_sum);
            if (std::abs(r) < std::abs(best)) best = r;
        }
    }
    return best;
}

}  // namespace

const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

const char* to_string(Method m) { return m == Method::nonlinear ? "nonlinear" : "linearized"; }

Method method_from_string(const std::string& s) {
    if (s == "nonlinear") return Method::nonlinear;
    if (s == "linearized") return Method::linearized;
    throw RangeError("unknown method '" + s + "'");
}

double SolverConfig::effective_tol() const {
    return noise_sigma > 0.0 ? std::max(tol, noise_tol_factor * noise_sigma) : tol;
}

AuxTerms aux_terms(const FrameObservation& obs, const CurveParams& params) {
    check_frame(obs, params);
    return aux_unchecked(obs, params);
}

std::pair<double, double> residual_eq8(const FrameObservation& obs, const CurveParams& params, double delta) {
    const AuxTerms a = aux_terms(obs, params);
    const double dc = obs.d_prime * obs.c_prime;
    const double ec = obs.e_prime * obs.c_prime;
    const double rb = a.p1 * std::sin(delta) - (a.q1 * std::cos(delta) - dc);
    const double ra = a.p2 * std::sin(delta + params.phi) - (a.q2 * std::cos(delta + params.phi) - ec);
    return {rb, ra};
}

std::pair<double, double> arccos_arguments(const FrameObservation& obs, const CurveParams& params) {
    const AuxTerms a = aux_terms(obs, params);
    return {obs.d_prime * obs.c_prime / std::hypot(a.p1, a.q1), obs.e_prime * obs.c_prime / std::hypot(a.p2, a.q2)};
}

double residual_eq12(const FrameObservation& obs, const CurveParams& params) {
    const AuxTerms a = aux_terms(obs, params);
    const double u1 = clamp_checked(obs.d_prime * obs.c_prime / std::hypot(a.p1, a.q1));
    const double u2 = clamp_checked(obs.e_prime * obs.c_prime / std::hypot(a.p2, a.q2));
    return branch_min(std::acos(u1), std::acos(u2), params.phi + a.omega2 - a.omega1);
}

double residual_eq12_soft(const FrameObservation& obs, const CurveParams& params) {
    const AuxTerms a = aux_unchecked(obs, params);
    const double u1 = obs.d_prime * obs.c_prime / std::hypot(a.p1, a.q1);
    const double u2 = obs.e_prime * obs.c_prime / std::hypot(a.p2, a.q2);
    const double excess = std::max(0.0, std::abs(u1) - 1.0) + std::max(0.0, std::abs(u2) - 1.0);
    const double r = branch_min(std::acos(std::clamp(u1, -1.0, 1.0)), std::acos(std::clamp(u2, -1.0, 1.0)),
                                params.phi + a.omega2 - a.omega1);
    return r >= 0.0 ? r + excess : r - excess;
}

QuasiPolyValue quasi_polynomial(double s1, double s2, double y) {
    const double terms[] = {
        s2 * s2,
        s1 * s1,
        y * y,
        y * y * s2 * s2 * s1 * s1,
        -2.0 * s1 * s2,
        -2.0 * y * s2,
        -2.0 * y * s2 * s2 * s1,
        -2.0 * y * s1,
        -2.0 * y * s2 * s1 * s1,
        -2.0 * y * y * s2 * s1,
        -8.0 * y * s2 * s1,
    };
    QuasiPolyValue v;
    for (double t : terms) {
        v.value += t;
        v.magnitude += std::abs(t);
    }
    return v;
}

double residual_quasi_poly(const FrameObservation& obs, const CurveParams& params) {
    const AuxTerms a = aux_terms(obs, params);
    const double cp2 = obs.c_prime * obs.c_prime;
    const double d2 = obs.d_prime * obs.d_prime;
    const double e2 = obs.e_prime * obs.e_prime;
    if (d2 * cp2 == 0.0 || e2 * cp2 == 0.0) throw DegenerateError("d' or e' is zero");
    const double C = params.c * params.c;
    const double ta2 = std::pow(std::tan(params.alpha), 2);
    const double tb2 = std::pow(std::tan(params.beta), 2);
    const double s1 = ((d2 + cp2) * C * ta2 - d2 * cp2 * (ta2 + 1.0)) / (d2 * cp2);
    const double s2 = ((e2 + cp2) * C * tb2 - e2 * cp2 * (tb2 + 1.0)) / (e2 * cp2);
    const double angle = params.phi + a.omega2 - a.omega1;
    if (std::abs(std::cos(angle)) < 1e-9) throw PoleError("tangent pole of phi + omega2 - omega1");
    const double y = std::pow(std::tan(angle), 2);
    const QuasiPolyValue v = quasi_polynomial(s1, s2, y);
    return v.magnitude > 0.0 ? v.value / v.magnitude : 0.0;
}

namespace {

PoseRecovery pose_candidates(const FrameObservation& obs, const CurveParams& params, double branch_tol,
                             bool strict) {
    const AuxTerms a = strict ? aux_terms(obs, params) : aux_unchecked(obs, params);
    double u1 = obs.d_prime * obs.c_prime / std::hypot(a.p1, a.q1);
    double u2 = obs.e_prime * obs.c_prime / std::hypot(a.p2, a.q2);
    if (strict) {
        u1 = clamp_checked(u1);
        u2 = clamp_checked(u2);
    } else {
        u1 = std::clamp(u1, -1.0, 1.0);
        u2 = std::clamp(u2, -1.0, 1.0);
    }
    const double a1 = std::acos(u1);

    PoseRecovery out;
    const Branch branches[2] = {Branch::plus, Branch::minus};
    for (int k = 0; k < 2; ++k) {
        const double sign = k == 0 ? 1.0 : -1.0;
        BranchCandidate& cand = out.branches[k];
        cand.branch = branches[k];
        cand.delta = wrap_two_pi(sign * a1 - a.omega1);
        cand.a_side_residual = std::cos(cand.delta + params.phi + a.omega2) - u2;
        cand.passes = std::abs(cand.a_side_residual) <= branch_tol;
    }
    const int pick = std::abs(out.branches[0].a_side_residual) <= std::abs(out.branches[1].a_side_residual) ? 0 : 1;
    if (strict && !out.branches[0].passes && !out.branches[1].passes)
        throw BranchConflictError("no delta branch satisfies the A-side equation");
    out.pose.delta = out.branches[pick].delta;
    out.pose.delta_branch = out.branches[pick].branch;
    out.pose.tau = std::acos(std::clamp(obs.c_prime / params.c, -1.0, 1.0));
    out.pose.depth_sign = DepthSign::front;
    out.pose.frame_index = obs.frame_index;
    return out;
}

}  // namespace

PoseRecovery recover_frame_pose(const FrameObservation& obs, const CurveParams& params, double branch_tol) {
    return pose_candidates(obs, params, branch_tol, true);
}

void complete_report(SolveReport& report, const std::vector<FrameObservation>& observations, double branch_tol) {
    report.per_frame.clear();
    double sum = 0.0;
    for (const FrameObservation& obs : observations) {
        report.per_frame.push_back(pose_candidates(obs, report.params, branch_tol, false).pose);
        const double r = residual_eq12_soft(obs, report.params);
        sum += r * r;
    }
    report.residual_rms = observations.empty() ? 0.0 : std::sqrt(sum / observations.size());
}

namespace {

using Vec = Eigen::VectorXd;

struct Problem {
    const std::vector<FrameObservation>& obs;
    double c_floor;

    CurveParams params(const Vec& x) const {
        const auto logistic = [](double t) { return (kPi / 2) / (1.0 + std::exp(-std::clamp(t, -30.0, 30.0))); };
        CurveParams p;
        p.c = c_floor * (1.0 + std::exp(std::clamp(x[0], -40.0, 40.0)));
        p.alpha = logistic(x[1]);
        p.beta = logistic(x[2]);
        p.phi = x[3];
        return p;
    }

    Vec residuals(const Vec& x) const {
        const CurveParams p = params(x);
        Vec r(obs.size());
        for (std::size_t i = 0; i < obs.size(); ++i) r[i] = residual_eq12_soft(obs[i], p);
        return r;
    }

    // Both per-frame equations with delta_i appended to the unknowns, each
    // divided by its amplitude. Smooth where the arccos form is not.
    Vec joint_residuals(const Vec& z) const {
        const CurveParams p = params(z.head(4));
        Vec r(2 * obs.size());
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const FrameObservation& o = obs[i];
            const AuxTerms a = aux_unchecked(o, p);
            const double delta = z[4 + i];
            r[2 * i] = (a.p1 * std::sin(delta) - a.q1 * std::cos(delta) + o.d_prime * o.c_prime) / std::hypot(a.p1, a.q1);
            r[2 * i + 1] = (a.p2 * std::sin(delta + p.phi) - a.q2 * std::cos(delta + p.phi) + o.e_prime * o.c_prime) /
                           std::hypot(a.p2, a.q2);
        }
        return r;
    }
};

struct StartResult {
    Vec x;
    double cost = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

template <class F>
StartResult levenberg_marquardt(const F& residuals, Vec x, double target, const SolverConfig& cfg) {
    const Eigen::Index m = x.size();
    Vec r = residuals(x);
    double cost = r.squaredNorm();
    double lambda = cfg.lambda0;
    Eigen::MatrixXd J(r.size(), m);
    bool fresh_jacobian = false;
    int it = 0;
    for (; it < cfg.max_iter && cost > target; ++it) {
        if (!fresh_jacobian) {
            for (Eigen::Index j = 0; j < m; ++j) {
                const double h = cfg.fd_step * std::max(1.0, std::abs(x[j]));
                Vec xp = x;
                Vec xm = x;
                xp[j] += h;
                xm[j] -= h;
                J.col(j) = (residuals(xp) - residuals(xm)) / (2.0 * h);
            }
            fresh_jacobian = true;
        }
        const Eigen::MatrixXd H = J.transpose() * J;
        const Vec g = J.transpose() * r;
        Eigen::MatrixXd A = H;
        const double floor = 1e-12 * std::max(1.0, H.diagonal().maxCoeff());
        for (Eigen::Index j = 0; j < m; ++j) A(j, j) += lambda * std::max(H(j, j), floor);
        const Vec step = A.ldlt().solve(-g);
        if (!step.allFinite()) break;
        const Vec xn = x + step;
        const Vec rn = residuals(xn);
        const double cn = rn.squaredNorm();
        if (cn < cost) {
            x = xn;
            r = rn;
            cost = cn;
            lambda *= 0.5;
            fresh_jacobian = false;
        } else {
            lambda *= 4.0;
            if (lambda > 1e16) break;
        }
        if (step.norm() < 1e-15 * (1.0 + x.norm())) break;
    }
    return {x, cost, it};
}

// Refines a start on the joint (params, delta_i) system and keeps the result
// only if it lowers the frame-independent cost.
StartResult polish(const Problem& prob, const StartResult& start, const SolverConfig& cfg) {
    const std::size_t n = prob.obs.size();
    const CurveParams p0 = prob.params(start.x);
    Vec z(4 + n);
    z.head(4) = start.x;
    for (std::size_t i = 0; i < n; ++i)
        z[4 + i] = pose_candidates(prob.obs[i], p0, cfg.branch_tol, false).pose.delta;
    const StartResult joint =
        levenberg_marquardt([&](const Vec& v) { return prob.joint_residuals(v); }, z, 0.0, cfg);
    StartResult out{joint.x.head(4), prob.residuals(joint.x.head(4)).squaredNorm(), joint.iterations};
    if (!(out.cost < start.cost)) {
        out.x = start.x;
        out.cost = start.cost;
    }
    return out;
}

}  // namespace

SolveReport solve_global(const std::vector<FrameObservation>& observations, const SolverConfig& config) {
    if (observations.size() < 4) throw InsufficientFramesError("insufficient frames (need 4)");
    double c_floor = 0.0;
    for (const FrameObservation& o : observations) {
        if (!(o.c_prime > 0.0) || !std::isfinite(o.d_prime) || !std::isfinite(o.e_prime))
            throw RangeError("observation with non-positive c' or non-finite d', e'");
        c_floor = std::max(c_floor, o.c_prime);
    }

    const Problem prob{observations, c_floor};
    const auto residuals = [&](const Vec& x) { return prob.residuals(x); };
    const double target = config.tol * config.tol * observations.size();
    StartResult best;
    int best_index = -1;
    std::vector<std::pair<StartResult, int>> finished;
    int total_iterations = 0;
    int index = 0;
    bool done = false;
    // Inverse of the logistic map used for alpha and beta.
    const auto angle_coord = [](double a) { return -std::log((kPi / 2) / a - 1.0); };
    // The (pi/4, pi/4) pair runs first; the other angle pairs only matter
    // when it fails.
    std::vector<std::pair<double, double>> angle_pairs{{kPi / 4, kPi / 4}};
    for (double a0 : config.angle_starts)
        for (double b0 : config.angle_starts)
            if (a0 != kPi / 4 || b0 != kPi / 4) angle_pairs.emplace_back(a0, b0);
    for (const auto& [a0, b0] : angle_pairs) {
        for (int k = 0; k < config.phi_starts && !done; ++k) {
            for (int j = 1; j <= config.c_starts && !done; ++j, ++index) {
                Vec x0(4);
                x0 << -j * std::log(2.0), angle_coord(a0), angle_coord(b0), 2.0 * kPi * k / config.phi_starts;
                const StartResult res = levenberg_marquardt(residuals, x0, target, config);
                total_iterations += res.iterations;
                finished.emplace_back(res, index);
                if (res.cost < best.cost) {
                    best = res;
                    best_index = index;
                }
                if (std::sqrt(best.cost / observations.size()) <= config.effective_tol()) done = true;
            }
        }
    }

    if (!done) {
        std::sort(finished.begin(), finished.end(),
                  [](const auto& a, const auto& b) { return a.first.cost < b.first.cost; });
        const std::size_t count = std::min<std::size_t>(finished.size(), config.polish_starts);
        for (std::size_t i = 0; i < count; ++i) {
            const StartResult res = polish(prob, finished[i].first, config);
            total_iterations += res.iterations;
            if (res.cost < best.cost) {
                best = res;
                best_index = finished[i].second;
            }
            if (std::sqrt(best.cost / observations.size()) <= config.effective_tol()) break;
        }
    }

    SolveReport report;
    report.method = Method::nonlinear;
    report.params = prob.params(best.x);
    report.params.phi = wrap_two_pi(report.params.phi);
    report.iterations = total_iterations;
    report.best_start = best_index;
    complete_report(report, observations, config.branch_tol);
    report.converged = report.residual_rms <= config.effective_tol();
    if (!report.converged)
        throw NoConvergenceError("no start reached the residual tolerance", report);
    return report;
}

SolveReport solve(const std::vector<FrameObservation>& observations, Method method, const SolverConfig& config) {
    return method == Method::nonlinear ? solve_global(observations, config) : linearized_solve(observations, config);
}

}  // namespace curverec
