#include "curverec/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curverec/errors.hpp"
#include "curverec/random.hpp"

namespace curverec {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 bezier(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3, double t) {
    const double s = 1.0 - t;
    return s * s * s * p0 + 3.0 * s * s * t * p1 + 3.0 * s * t * t * p2 + t * t * t * p3;
}

Vec2 rot2(double a, const Vec2& v) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

}  // namespace

// S lies on +y, and the tangent at A leaves towards azimuth phi - pi
// around AB.
Vec3 canonical_tangent_at_B(const CurveParams& p) { return {std::cos(p.alpha), -std::sin(p.alpha), 0.0}; }

Vec3 canonical_tangent_at_A(const CurveParams& p) {
    return {std::cos(p.beta), -std::sin(p.beta) * std::cos(p.phi), -std::sin(p.beta) * std::sin(p.phi)};
}

void validate_params(const CurveParams& p) {
    const bool ok = std::isfinite(p.c) && p.c > 0.0 && p.alpha > 0.0 && p.alpha < kPi / 2 &&
                    p.beta > 0.0 && p.beta < kPi / 2 && p.phi >= 0.0 && p.phi < 2.0 * kPi;
    if (!ok) throw RangeError("curve parameters outside admissible ranges");
}

std::array<double, 7> DerivationTrace::relation_errors() const {
    const double as = std::abs(AS);
    return {
        std::abs(AS / AB - tan_alpha) / (1.0 + tan_alpha),
        std::abs(AS_p / as - std::cos(delta)),
        std::abs(SS_p / as - std::sin(delta)),
        std::abs(AB_p / AB - std::cos(tau)),
        std::abs(SpSpp - SS_p * std::sin(tau)) / as,
        std::abs(AS_p - (AD_p + DpSp)) / as,
        std::abs(AD_p * SpSpp - AB_p * DpSp) / (AB * as),
    };
}

double DerivationTrace::max_relation_error() const {
    const auto e = relation_errors();
    return *std::max_element(e.begin(), e.end());
}

Curve3 make_test_curve(std::uint64_t seed, const CurveParams& params, int samples) {
    validate_params(params);
    if (samples < 8) throw RangeError("a curve needs at least 8 samples");

    Rng rng(seed);
    const double c = params.c;
    const Vec3 A = Vec3::Zero();
    const Vec3 B(c, 0.0, 0.0);
    const Vec3 tA = canonical_tangent_at_A(params);
    const Vec3 tB = canonical_tangent_at_B(params);

    const Vec3 P1 = A + rng.uniform(0.25, 0.45) * c * tA;
    const Vec3 Q2 = B - rng.uniform(0.25, 0.45) * c * tB;
    Vec3 M = 0.5 * (P1 + Q2);
    for (int k = 0; k < 3; ++k) M[k] += rng.uniform(-0.1, 0.1) * c;
    Vec3 tM = (Q2 - P1).normalized();
    for (int k = 0; k < 3; ++k) tM[k] += rng.uniform(-0.2, 0.2);
    tM.normalize();
    const Vec3 P2 = M - rng.uniform(0.15, 0.3) * c * tM;
    const Vec3 Q1 = M + rng.uniform(0.15, 0.3) * c * tM;

    Curve3 curve;
    curve.samples.reserve(samples);
    const int first = samples / 2 + 1;  // includes M
    const int second = samples - first;
    for (int i = 0; i < first; ++i) {
        const double t = static_cast<double>(i) / (first - 1);
        curve.samples.push_back(bezier(A, P1, P2, M, t));
    }
    for (int i = 1; i <= second; ++i) {
        const double t = static_cast<double>(i) / second;
        curve.samples.push_back(bezier(M, Q1, Q2, B, t));
    }
    curve.samples.front() = A;
    curve.samples.back() = B;
    curve.tangent_at_A = tA;
    curve.tangent_at_B = tB;
    return curve;
}

CurveParams curve_invariants(const Curve3& curve) {
    const Vec3& A = curve.A();
    const Vec3& B = curve.B();
    const Vec3 ab = B - A;
    const double c = ab.norm();
    if (!(c > 0.0)) throw DegenerateError("A and B coincide");
    const Vec3 u = ab / c;
    const Vec3& tA = curve.tangent_at_A;
    const Vec3& tB = curve.tangent_at_B;

    const double tol = 1e-12;
    const double ca = u.dot(tB);
    const double sa = u.cross(tB).norm();
    const double cb = u.dot(tA);
    const double sb = u.cross(tA).norm();
    if (sa < tol || sb < tol) throw DegenerateError("tangent parallel to AB");
    if (std::abs(ca) < tol || std::abs(cb) < tol) throw DegenerateError("tangent perpendicular to AB");

    // S: tangent line at B meets the plane through A normal to AB.
    // T: tangent line at A meets the plane through B normal to AB.
    const Vec3 S = B - (c / ca) * tB;
    const Vec3 T = A + (c / cb) * tA;
    const Vec3 e1 = (S - A).normalized();
    const Vec3 e2 = u.cross(e1);
    const Vec3 v = T - B;
    const double psi = std::atan2(v.dot(e2), v.dot(e1));

    CurveParams p;
    p.c = c;
    p.alpha = std::atan2(sa, std::abs(ca));
    p.beta = std::atan2(sb, std::abs(cb));
    p.phi = wrap_two_pi(psi + kPi);
    return p;
}

RigidMotion canonical_motion(double delta, double tau) {
    RigidMotion m;
    m.rotation = Eigen::AngleAxisd(tau, -Vec3::UnitY()).toRotationMatrix() *
                 Eigen::AngleAxisd(delta, Vec3::UnitX()).toRotationMatrix();
    return m;
}

Curve3 apply_motion(const Curve3& curve, const RigidMotion& m) {
    Curve3 out;
    out.samples.reserve(curve.samples.size());
    for (const Vec3& p : curve.samples) out.samples.push_back(m.apply(p));
    out.tangent_at_A = m.apply_direction(curve.tangent_at_A);
    out.tangent_at_B = m.apply_direction(curve.tangent_at_B);
    return out;
}

void check_canonical_pose(const Curve3& curve, double tol) {
    if (curve.samples.size() < 2) throw PreconditionError("curve has fewer than two samples");
    const Vec3& A = curve.A();
    const Vec3& B = curve.B();
    const bool ok = A.norm() <= tol && std::abs(B.y()) <= tol && std::abs(B.z()) <= tol && B.x() > tol &&
                    std::abs(curve.tangent_at_B.z()) <= tol;
    if (!ok) throw PreconditionError("curve is not in canonical pose");
}

Curve3 apply_canonical_motion(const Curve3& curve, double delta, double tau) {
    check_canonical_pose(curve);
    return apply_motion(curve, canonical_motion(delta, tau));
}

FrameImage render_frame(const Curve3& curve) {
    FrameImage img;
    img.projected_samples.reserve(curve.samples.size());
    for (const Vec3& p : curve.samples) img.projected_samples.push_back(project_orthogonal(p));
    img.A_proj = img.projected_samples.front();
    img.B_proj = img.projected_samples.back();
    const Vec2 ta = project_orthogonal(curve.tangent_at_A);
    const Vec2 tb = project_orthogonal(curve.tangent_at_B);
    if (ta.norm() < 1e-12 || tb.norm() < 1e-12)
        throw DegenerateError("tangent perpendicular to the frame plane");
    img.tangent_dir_at_A_proj = ta.normalized();
    img.tangent_dir_at_B_proj = tb.normalized();
    return img;
}

FrameImage apply_inplane(const FrameImage& img, double rot, const Vec2& shift) {
    FrameImage out;
    out.projected_samples.reserve(img.projected_samples.size());
    for (const Vec2& p : img.projected_samples) out.projected_samples.push_back(rot2(rot, p) + shift);
    out.A_proj = rot2(rot, img.A_proj) + shift;
    out.B_proj = rot2(rot, img.B_proj) + shift;
    out.tangent_dir_at_A_proj = rot2(rot, img.tangent_dir_at_A_proj);
    out.tangent_dir_at_B_proj = rot2(rot, img.tangent_dir_at_B_proj);
    return out;
}

DerivationTrace derivation_trace(const Curve3& curve, double delta, double tau) {
    check_canonical_pose(curve);
    if (!(tau > 0.0 && tau < kPi / 2)) throw RangeError("tau outside (0, pi/2)");
    const CurveParams params = curve_invariants(curve);

    const Vec3 A = curve.A();
    const Vec3 B = curve.B();
    const Vec3 axis_ab = Vec3::UnitX();
    const Vec3 axis_l1 = -Vec3::UnitY();

    // Side of l1 holding S before the delta rotation.
    const Vec3& tB0 = curve.tangent_at_B;
    const double side = (B - (B.x() / tB0.x()) * tB0).y() >= 0.0 ? 1.0 : -1.0;

    const Vec3 tB = rotate_about_axis(tB0, Vec3::Zero(), axis_ab, delta);
    if (std::abs(tB.x()) < 1e-12) throw DegenerateError("tangent at B parallel to plane p1");
    const Vec3 S = B - (B.x() / tB.x()) * tB;
    const Vec3 S_p(S.x(), S.y(), 0.0);

    const Vec3 B_rot = rotate_about_axis(B, A, axis_l1, tau);
    const Vec3 S_rot = rotate_about_axis(S, A, axis_l1, tau);
    const Vec2 B_p = project_orthogonal(B_rot);
    const Vec2 S_pp = project_orthogonal(S_rot);
    const Line2 l1{Vec2::Zero(), Vec2::UnitY()};
    Vec2 D_p;
    try {
        D_p = intersect_lines_2d(Line2::between(B_p, S_pp), l1);
    } catch (const ParallelError&) {
        throw DegenerateError("line B'S'' parallel to l1");
    }

    DerivationTrace t;
    t.AB = (B - A).norm();
    t.tan_alpha = std::tan(params.alpha);
    t.delta = delta;
    t.tau = tau;
    t.AS = (S - A).norm();
    t.AS_p = side * S_p.y();
    t.SS_p = side * S.z();
    t.AB_p = B_p.norm();
    t.SpSpp = -side * S_pp.x();
    t.AD_p = side * D_p.y();
    t.DpSp = side * (S_p.y() - D_p.y());
    return t;
}

CurveParams random_params(Rng& rng) {
    CurveParams p;
    p.c = rng.uniform(0.5, 2.0);
    p.alpha = rng.uniform(0.2, kPi / 2 - 0.2);
    p.beta = rng.uniform(0.2, kPi / 2 - 0.2);
    // Keep the tangent planes apart so that curves are clearly non-planar.
    double phi = rng.uniform(0.2, kPi - 0.2);
    if (rng.uniform() < 0.5) phi += kPi;
    p.phi = phi;
    return p;
}

MotionScript random_motion(Rng& rng, int frames, bool nuisance) {
    MotionScript script;
    for (int i = 0; i < frames; ++i) {
        FrameMotion f;
        f.delta = rng.uniform(0.05, kPi - 0.05);
        f.tau = rng.uniform(0.05, kPi / 2 - 0.05);
        if (nuisance) {
            f.inplane_rot = rng.uniform(0.0, 2.0 * kPi);
            f.inplane_shift = Vec2(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        }
        script.frames.push_back(f);
    }
    return script;
}

namespace {

// Rejects frames where D' or E' sits near A' or B' or near infinity.
bool generic_frame(const CurveParams& p, const FrameMotion& f) {
    const double ct = std::cos(f.tau);
    const double st = std::sin(f.tau);
    const double ta = std::tan(p.alpha);
    const double tb = std::tan(p.beta);
    const double a = f.delta + p.phi;
    return std::abs(std::cos(f.delta)) > 0.02 && std::abs(std::cos(a)) > 0.02 &&
           std::abs(ct + ta * st * std::sin(f.delta)) > 0.05 && std::abs(ct + tb * st * std::sin(a)) > 0.05;
}

}  // namespace

Scene make_scene(std::uint64_t seed, int frames, bool nuisance, int samples, std::optional<CurveParams> params) {
    if (frames < 1) throw RangeError("frame count must be positive");
    Rng rng(seed);
    Scene s;
    s.seed = seed;
    s.samples_per_curve = samples;
    s.params = random_params(rng);
    if (params) s.params = *params;
    validate_params(s.params);
    while (static_cast<int>(s.motion.frames.size()) < frames) {
        const MotionScript one = random_motion(rng, 1, nuisance);
        if (generic_frame(s.params, one.frames[0])) s.motion.frames.push_back(one.frames[0]);
    }
    s.curve = scene_curve(s);
    return s;
}

Curve3 scene_curve(const Scene& scene) {
    return make_test_curve(scene.seed ^ 0x9e3779b97f4a7c15ULL, scene.params, scene.samples_per_curve);
}

std::vector<FrameImage> render_scene(const Scene& scene, double noise_sigma) {
    if (noise_sigma < 0.0) throw RangeError("noise sigma must be non-negative");
    Rng noise(scene.seed ^ 0x5851f42d4c957f2dULL);
    std::vector<FrameImage> out;
    out.reserve(scene.motion.frames.size());
    for (const FrameMotion& f : scene.motion.frames) {
        FrameImage img = render_frame(apply_canonical_motion(scene.curve, f.delta, f.tau));
        if (noise_sigma > 0.0) {
            for (Vec2& p : img.projected_samples) {
                p.x() += noise_sigma * noise.normal();
                p.y() += noise_sigma * noise.normal();
            }
            img.A_proj = img.projected_samples.front();
            img.B_proj = img.projected_samples.back();
            img.tangent_dir_at_A_proj = rot2(noise_sigma * noise.normal(), img.tangent_dir_at_A_proj);
            img.tangent_dir_at_B_proj = rot2(noise_sigma * noise.normal(), img.tangent_dir_at_B_proj);
        }
        out.push_back(apply_inplane(img, f.inplane_rot, f.inplane_shift));
    }
    return out;
}

}  // namespace curverec
