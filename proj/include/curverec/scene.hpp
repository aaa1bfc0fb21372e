#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "curverec/geometry.hpp"

namespace curverec {

class Rng;

struct CurveParams {
    double c = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double phi = 0.0;
};

// Throws RangeError when a field is outside its admissible range.
void validate_params(const CurveParams& p);

// Samples run from A to B; tangents are unit and point along the traversal.
struct Curve3 {
    std::vector<Vec3> samples;
    Vec3 tangent_at_A = Vec3::UnitX();
    Vec3 tangent_at_B = Vec3::UnitX();

    const Vec3& A() const { return samples.front(); }
    const Vec3& B() const { return samples.back(); }
};

struct FrameMotion {
    double delta = 0.0;
    double tau = 0.0;
    double inplane_rot = 0.0;
    Vec2 inplane_shift = Vec2::Zero();
};

struct MotionScript {
    std::vector<FrameMotion> frames;
};

struct FrameImage {
    std::vector<Vec2> projected_samples;
    Vec2 A_proj = Vec2::Zero();
    Vec2 B_proj = Vec2::Zero();
    Vec2 tangent_dir_at_A_proj = Vec2::UnitX();
    Vec2 tangent_dir_at_B_proj = Vec2::UnitX();
};

struct DerivationTrace {
    double AB = 0.0;
    double tan_alpha = 0.0;
    double delta = 0.0;
    double tau = 0.0;
    // Lengths along l1 are signed, positive on the side of S at delta = 0.
    double AS = 0.0;
    double AS_p = 0.0;
    double SS_p = 0.0;
    double SpSpp = 0.0;
    double AD_p = 0.0;
    double DpSp = 0.0;
    double AB_p = 0.0;

    // Residuals of the seven relations, each scaled to be dimensionless.
    std::array<double, 7> relation_errors() const;
    double max_relation_error() const;
};

inline constexpr int kDefaultSamples = 64;

Curve3 make_test_curve(std::uint64_t seed, const CurveParams& params, int samples = kDefaultSamples);

CurveParams curve_invariants(const Curve3& curve);

// Unit tangents of a canonically posed curve realizing params.
Vec3 canonical_tangent_at_A(const CurveParams& params);
Vec3 canonical_tangent_at_B(const CurveParams& params);

// Rotation by delta about AB (the +x axis) followed by tau about l1 (the y
// axis, oriented so that B rises towards +z).
RigidMotion canonical_motion(double delta, double tau);

Curve3 apply_motion(const Curve3& curve, const RigidMotion& m);
Curve3 apply_canonical_motion(const Curve3& curve, double delta, double tau);
void check_canonical_pose(const Curve3& curve, double tol = 1e-9);

FrameImage render_frame(const Curve3& curve);

// Applies x -> R(rot) x + shift to every point and direction of the image.
FrameImage apply_inplane(const FrameImage& img, double rot, const Vec2& shift);

DerivationTrace derivation_trace(const Curve3& curve, double delta, double tau);

// Generation ranges used for synthetic scenes.
CurveParams random_params(Rng& rng);
MotionScript random_motion(Rng& rng, int frames, bool nuisance);

struct Scene {
    std::uint64_t seed = 0;
    CurveParams params;
    MotionScript motion;
    int samples_per_curve = kDefaultSamples;
    Curve3 curve;
};

// All random choices derive from seed. params overrides the random draw.
Scene make_scene(std::uint64_t seed, int frames, bool nuisance, int samples = kDefaultSamples,
                 std::optional<CurveParams> params = std::nullopt);

// Regenerates the curve of a scene description (seed, params, samples).
Curve3 scene_curve(const Scene& scene);

// Moves, renders and perturbs each frame. Noise is zero-mean Gaussian on
// sample coordinates and on tangent angles, drawn from a stream derived
// from the scene seed.
std::vector<FrameImage> render_scene(const Scene& scene, double noise_sigma = 0.0);

}  // namespace curverec
