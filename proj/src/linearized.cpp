#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "curverec/solver.hpp"

// Linearized estimation. With D = c'/d', E = c'/e', K^2 = 1 - c'^2 z and the
// unknowns z = 1/c^2, ai = cot(alpha)/c, bi = cot(beta)/c, s = sin(phi),
// co = cos(phi), eliminating delta from the two per-frame equations gives
//   E0^2 - K^2 E1^2 = 0,
//   E0 = c'^2 [ai^2 (E^2+K^2) + bi^2 (D^2+K^2) - 2 ai bi (DE+K^2) co]
//        - (DE+K^2)^2 s^2 - (E-D)^2 K^2 co^2,
//   E1 = 2 (E-D) s [(DE+K^2) co - c'^2 ai bi].
// Expanded, this is a sum of 39 observable monomials c'^i D^j E^k, each
// multiplied by one polynomial in the unknowns. Every such coefficient
// becomes a fresh linear unknown; the homogeneous system is solved for its
// null vector, and the unknowns are read back from selected coefficients.

namespace curverec {

namespace {

constexpr double kPi = std::numbers::pi;

using Key = std::array<int, 3>;

const std::vector<Key> kMonomials = {
    {8, 0, 0}, {6, 2, 0}, {6, 1, 1}, {6, 0, 2}, {6, 0, 0}, {4, 4, 0}, {4, 3, 1}, {4, 2, 2},
    {4, 2, 0}, {4, 1, 3}, {4, 1, 1}, {4, 0, 4}, {4, 0, 2}, {4, 0, 0}, {2, 4, 2}, {2, 4, 0},
    {2, 3, 3}, {2, 3, 1}, {2, 2, 4}, {2, 2, 2}, {2, 2, 0}, {2, 1, 3}, {2, 1, 1}, {2, 0, 4},
    {2, 0, 2}, {2, 0, 0}, {0, 4, 4}, {0, 4, 2}, {0, 4, 0}, {0, 3, 3}, {0, 3, 1}, {0, 2, 4},
    {0, 2, 2}, {0, 2, 0}, {0, 1, 3}, {0, 1, 1}, {0, 0, 4}, {0, 0, 2}, {0, 0, 0},
};

class Coefficients {
public:
    Coefficients(const Eigen::VectorXd& b, const Eigen::VectorXd& scale) : b_(b), scale_(scale) {
        for (std::size_t i = 0; i < kMonomials.size(); ++i) index_[kMonomials[i]] = static_cast<int>(i);
    }
    double operator()(int i, int j, int k) const { return b_[index_.at({i, j, k})]; }
    // Magnitude in the column-scaled system, where the null-vector error is
    // uniform; relative accuracy of a coefficient grows with it.
    double weight(int i, int j, int k) const { return std::abs(b_[index_.at({i, j, k})]) * scale(i, j, k); }
    double scale(int i, int j, int k) const { return scale_[index_.at({i, j, k})]; }

private:
    Eigen::VectorXd b_;
    Eigen::VectorXd scale_;
    std::map<Key, int> index_;
};

CurveParams read_back(const Coefficients& b, const std::vector<FrameObservation>& observations) {
    // Pure trigonometric block: s^4, co^4 and -2 co^2 s^2 times the scale.
    // Logs of their magnitudes are linear in m = log(lambda co^4) and
    // r = log(s^2 / co^2).
    struct LogRow {
        Key key;
        double halve, r_coeff;
    };
    const LogRow rows[] = {
        {{0, 0, 0}, 1.0, 2.0}, {{0, 4, 4}, 1.0, 2.0}, {{0, 4, 0}, 1.0, 0.0}, {{0, 0, 4}, 1.0, 0.0},
        {{0, 4, 2}, 0.5, 1.0}, {{0, 2, 4}, 0.5, 1.0}, {{0, 2, 0}, 0.5, 1.0}, {{0, 0, 2}, 0.5, 1.0},
    };
    Eigen::MatrixXd L(8, 2);
    Eigen::VectorXd l(8);
    for (int i = 0; i < 8; ++i) {
        const auto [x, y, w] = rows[i].key;
        const double weight = b.weight(x, y, w);
        L(i, 0) = weight;
        L(i, 1) = weight * rows[i].r_coeff;
        l[i] = weight * std::log(std::abs(b(x, y, w)) * rows[i].halve);
    }
    if (!l.allFinite()) throw DegenerateError("vanishing trigonometric coefficients");
    const Eigen::Vector2d mr = L.colPivHouseholderQr().solve(l);
    const double ratio = std::exp(mr[1]);
    const double Q = 1.0 / (1.0 + ratio);
    const double S = ratio / (1.0 + ratio);
    const double lam = std::exp(mr[0]) / (Q * Q);

    // Coefficients of order c'^2 are linear in (z, ai^2, bi^2, ai bi co).
    struct LinRow {
        Key key;
        double z, a2, b2, w;
    };
    const double T = Q + S;
    const LinRow lin[] = {
        {{2, 4, 0}, -2 * Q * Q, 0, -2 * Q, 0},
        {{2, 0, 4}, -2 * Q * Q, -2 * Q, 0, 0},
        {{2, 4, 2}, 2 * S * Q, 0, -2 * S, 0},
        {{2, 2, 4}, 2 * S * Q, -2 * S, 0, 0},
        {{2, 3, 3}, -4 * S * T, 0, 0, 4 * S},
        {{2, 0, 0}, -4 * S * S, -2 * S, -2 * S, 4 * S},
        {{2, 3, 1}, 8 * Q * T, 0, 4 * (Q - S), 4 * (Q + 2 * S)},
        {{2, 1, 3}, 8 * Q * T, 4 * (Q - S), 0, 4 * (Q + 2 * S)},
        {{2, 2, 2}, -2 * (6 * Q * Q + 8 * Q * S + 6 * S * S), -2 * T, -2 * T, -2 * (4 * Q + 2 * S)},
        {{2, 2, 0}, 6 * Q * S, -2 * Q, -2 * T, 2 * (2 * Q + 4 * S)},
        {{2, 1, 1}, -12 * S * T, -4 * (S - Q), -4 * (S - Q), -4 * (2 * Q + S)},
        {{2, 0, 2}, 6 * Q * S, -2 * T, -2 * Q, 2 * (2 * Q + 4 * S)},
    };
    constexpr int n_lin = sizeof(lin) / sizeof(lin[0]);
    Eigen::MatrixXd M(n_lin, 4);
    Eigen::VectorXd rhs(n_lin);
    for (int i = 0; i < n_lin; ++i) {
        M.row(i) << lin[i].z, lin[i].a2, lin[i].b2, lin[i].w;
        const auto [x, y, w] = lin[i].key;
        rhs[i] = b(x, y, w) / lam;
        // Absolute errors of the coefficients scale as 1 / column scale.
        M.row(i) *= b.scale(x, y, w);
        rhs[i] *= b.scale(x, y, w);
    }
    const Eigen::Vector4d u = M.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    const double z = u[0];
    const double ai2 = u[1];
    const double bi2 = u[2];
    if (!(z > 0.0 && ai2 > 0.0 && bi2 > 0.0)) throw DegenerateError("inconsistent linearized coefficients");

    CurveParams p;
    p.c = 1.0 / std::sqrt(z);
    p.alpha = std::atan2(std::sqrt(z), std::sqrt(ai2));
    p.beta = std::atan2(std::sqrt(z), std::sqrt(bi2));

    // The sign of sin(phi) is lost to squaring; the sign of cos(phi)
    // follows from ai bi co but is ill-conditioned near phi = pi/2, so all
    // four quadrant images are scored by the frame-independent residual.
    const double phi0 = std::atan2(std::sqrt(S), std::copysign(std::sqrt(Q), u[3]));
    const double candidates[] = {phi0, 2 * kPi - phi0, kPi - phi0, kPi + phi0};
    double best = std::numeric_limits<double>::infinity();
    for (double phi : candidates) {
        CurveParams trial = p;
        trial.phi = wrap_two_pi(phi);
        double sum = 0.0;
        for (const FrameObservation& o : observations) {
            const double r = residual_eq12_soft(o, trial);
            sum += r * r;
        }
        if (sum < best) {
            best = sum;
            p.phi = trial.phi;
        }
    }
    return p;
}

}  // namespace

const std::vector<std::array<int, 3>>& linear_monomials() { return kMonomials; }

SolveReport linearized_solve(const std::vector<FrameObservation>& observations, const SolverConfig& config) {
    const int n_mono = static_cast<int>(kMonomials.size());
    const int unknowns = n_mono - 1;
    const int n = static_cast<int>(observations.size());
    if (n < unknowns)
        throw UnderdeterminedError("insufficient frames for the linearized solve (need " + std::to_string(unknowns) +
                                   ", have " + std::to_string(n) + ")");

    Eigen::MatrixXd M(n, n_mono);
    for (int r = 0; r < n; ++r) {
        const FrameObservation& o = observations[r];
        if (!(o.c_prime > 0.0) || o.d_prime == 0.0 || o.e_prime == 0.0 || !std::isfinite(o.d_prime) ||
            !std::isfinite(o.e_prime))
            throw DegenerateError("frame " + std::to_string(o.frame_index) + " has zero or invalid d' or e'");
        const double D = o.c_prime / o.d_prime;
        const double E = o.c_prime / o.e_prime;
        for (int k = 0; k < n_mono; ++k) {
            const Key& e = kMonomials[k];
            M(r, k) = std::pow(o.c_prime, e[0]) * std::pow(D, e[1]) * std::pow(E, e[2]);
        }
    }
    const Eigen::VectorXd scale = M.colwise().norm().transpose();
    if ((scale.array() <= 0.0).any()) throw RankDeficientError("a monomial column vanishes on every frame");
    const Eigen::MatrixXd Ms = M * scale.cwiseInverse().asDiagonal();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ms, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const int m = static_cast<int>(sv.size());

    LinearDiagnostics diag;
    diag.monomial_count = n_mono;
    diag.unknowns = unknowns;
    diag.frames = n;
    diag.numerical_rank = 0;
    for (int i = 0; i < m; ++i)
        if (sv[i] > config.rank_tol * sv[0]) ++diag.numerical_rank;
    const double second_smallest = sv[unknowns - 1];
    diag.condition = sv[0] / second_smallest;
    diag.null_gap = m > unknowns ? sv[unknowns] / second_smallest : 0.0;
    if (diag.numerical_rank < unknowns)
        throw RankDeficientError("linearized system has rank " + std::to_string(diag.numerical_rank) + " < " +
                                 std::to_string(unknowns) + " (degenerate motion)");

    Eigen::VectorXd b = svd.matrixV().col(n_mono - 1).cwiseQuotient(scale);
    Coefficients coeffs(b, scale);
    const double scale_sign = coeffs(0, 0, 0) + coeffs(0, 4, 4) + coeffs(0, 4, 0) + coeffs(0, 0, 4);
    if (scale_sign < 0.0) b = -b;

    SolveReport report;
    report.method = Method::linearized;
    report.params = read_back(Coefficients(b, scale), observations);
    report.iterations = 0;
    report.linear = diag;
    complete_report(report, observations, config.branch_tol);
    report.converged = true;
    return report;
}

}  // namespace curverec
