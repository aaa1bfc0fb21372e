#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "curverec/geometry.hpp"

namespace curverec {

struct PlanarSceneView {
    Vec2 A = Vec2::Zero();
    Vec2 B = Vec2::UnitX();
    Vec2 C = Vec2::Zero();
    Line2 tangent_line_at_A{Vec2::Zero(), Vec2::UnitX()};
    Line2 tangent_line_at_B{Vec2::UnitX(), Vec2::UnitX()};
    std::vector<Vec2> curve_image;
};

struct DerivedPoints {
    Vec2 D;
    Vec2 E;
};

// Throws PreconditionError when the view's invariants do not hold.
void validate_view(const PlanarSceneView& view);

DerivedPoints construct_DE(const PlanarSceneView& view);

// (AE/AY) : (BE/BY) with lengths signed along A -> B.
double double_quotient(const Vec2& A, const Vec2& E, const Vec2& Y, const Vec2& B);

struct ChordPoints {
    Vec2 A;
    Vec2 E;
    Vec2 B;
};

// Point Y2 on A2B2 whose double quotient with (A2, E2, B2) equals that of
// Y1 with (A1, E1, B1).
Vec2 solve_Y_second(const ChordPoints& view1, const ChordPoints& view2, const Vec2& Y1);

struct CorrespondencePair {
    int index = 0;
    Vec2 x1;
    Vec2 x2;
};

// With after_arc, the match is the first crossing of view 2's curve beyond
// that arc-length position (the previous match).
PolylineCrossing correspond_crossing(const Vec2& X1, const PlanarSceneView& view1, const PlanarSceneView& view2,
                                     std::optional<double> after_arc = std::nullopt);

Vec2 correspond_point(const Vec2& X1, const PlanarSceneView& view1, const PlanarSceneView& view2,
                      std::optional<double> after_arc = std::nullopt);

std::vector<CorrespondencePair> correspond_curve(const PlanarSceneView& view1, const PlanarSceneView& view2);

// Synthetic two-camera scenes of a planar cubic arc.
struct PinholeCamera {
    Mat3 rotation = Mat3::Identity();
    Vec3 center = Vec3::Zero();

    // Unit focal length; throws DegenerateError for points behind the camera.
    Vec2 project(const Vec3& X) const;
};

struct PlanarCurve3 {
    std::vector<Vec3> samples;  // A first, B last
    int c_index = 0;
    Vec3 D;  // common point of the end tangents
};

struct PlanarFixture {
    PlanarCurve3 curve;
    PinholeCamera camera1;
    PinholeCamera camera2;
    PlanarSceneView view1;
    PlanarSceneView view2;
};

PlanarCurve3 make_planar_curve(std::uint64_t seed, int samples = 64);
PlanarSceneView render_planar_view(const PlanarCurve3& curve, const PinholeCamera& camera);
PlanarFixture make_planar_fixture(std::uint64_t seed, int samples = 64);

}  // namespace curverec
