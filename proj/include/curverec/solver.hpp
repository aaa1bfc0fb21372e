#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curverec/errors.hpp"
#include "curverec/observe.hpp"
#include "curverec/scene.hpp"

namespace curverec {

struct AuxTerms {
    double q1 = 0.0;
    double p1 = 0.0;
    double q2 = 0.0;
    double p2 = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
};

enum class Branch { plus, minus };
enum class DepthSign { front, back };
enum class Method { nonlinear, linearized };

const char* to_string(Branch b);
const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct FramePose {
    double delta = 0.0;
    double tau = 0.0;
    Branch delta_branch = Branch::plus;
    DepthSign depth_sign = DepthSign::front;
    int frame_index = 0;
};

struct BranchCandidate {
    Branch branch = Branch::plus;
    double delta = 0.0;
    // cos(delta + phi + omega2) - e'c'/R2
    double a_side_residual = 0.0;
    bool passes = false;
};

struct PoseRecovery {
    FramePose pose;
    std::array<BranchCandidate, 2> branches;
};

struct LinearDiagnostics {
    int monomial_count = 0;
    int unknowns = 0;
    int frames = 0;
    int numerical_rank = 0;
    double condition = 0.0;      // sigma_max / second smallest singular value
    double null_gap = 0.0;       // smallest / second smallest singular value
};

struct SolverConfig {
    double tol = 1e-10;
    int max_iter = 200;
    int phi_starts = 16;
    int c_starts = 6;
    // Initial values paired for alpha and beta; alpha = beta = pi/4 runs first.
    std::vector<double> angle_starts = {0.25, 0.55, std::numbers::pi / 4, 1.0, 1.3};
    // Best start results refined on the joint (params, delta) system when
    // no start reaches tol.
    int polish_starts = 8;
    double lambda0 = 1e-3;
    double fd_step = 1e-7;
    // When positive, the convergence threshold is raised to
    // max(tol, noise_tol_factor * noise_sigma).
    double noise_sigma = 0.0;
    double noise_tol_factor = 100.0;
    double branch_tol = 1e-6;
    double rank_tol = 1e-12;

    double effective_tol() const;
};

struct SolveReport {
    CurveParams params;
    std::vector<FramePose> per_frame;
    double residual_rms = 0.0;
    int iterations = 0;
    Method method = Method::nonlinear;
    bool converged = false;
    int best_start = -1;
    std::optional<LinearDiagnostics> linear;
};

class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& what, SolveReport best)
        : Error("no_convergence", what), best_(std::move(best)) {}
    const SolveReport& best() const noexcept { return best_; }

private:
    SolveReport best_;
};

inline constexpr double kArccosSlack = 1e-9;

AuxTerms aux_terms(const FrameObservation& obs, const CurveParams& params);

// (B-side, A-side) residuals of the per-frame equations in delta.
std::pair<double, double> residual_eq8(const FrameObservation& obs, const CurveParams& params, double delta);

// Arguments of the two arccos terms: d'c'/R1 and e'c'/R2.
std::pair<double, double> arccos_arguments(const FrameObservation& obs, const CurveParams& params);

// Frame-independent residual, minimized over the four arccos branch pairs
// and folded into (-pi, pi].
double residual_eq12(const FrameObservation& obs, const CurveParams& params);

// Same value without the domain check; arguments outside [-1, 1] are
// clamped and the excess is added to the magnitude.
double residual_eq12_soft(const FrameObservation& obs, const CurveParams& params);

struct QuasiPolyValue {
    double value = 0.0;
    double magnitude = 0.0;  // sum of absolute term values
};

QuasiPolyValue quasi_polynomial(double s1, double s2, double y);

// Quasi-polynomial residual divided by the sum of its term magnitudes.
double residual_quasi_poly(const FrameObservation& obs, const CurveParams& params);

PoseRecovery recover_frame_pose(const FrameObservation& obs, const CurveParams& params,
                                double branch_tol = 1e-6);

SolveReport solve_global(const std::vector<FrameObservation>& observations, const SolverConfig& config = {});

SolveReport linearized_solve(const std::vector<FrameObservation>& observations, const SolverConfig& config = {});

SolveReport solve(const std::vector<FrameObservation>& observations, Method method, const SolverConfig& config = {});

// Exponents (c', c'/d', c'/e') of the observable monomials used by the
// linearized solve.
const std::vector<std::array<int, 3>>& linear_monomials();

// Fills poses and residual_rms for fixed params; never throws on a branch
// conflict (the better branch is kept).
void complete_report(SolveReport& report, const std::vector<FrameObservation>& observations,
                     double branch_tol = 1e-6);

}  // namespace curverec
