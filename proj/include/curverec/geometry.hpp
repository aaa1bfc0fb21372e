#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace curverec {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kParallelTolerance = 1e-9;

struct Line2 {
    Vec2 point;
    Vec2 direction;  // unit

    // Normalizes dir; throws DegenerateError for a zero direction.
    static Line2 through(const Vec2& point, const Vec2& dir);
    static Line2 between(const Vec2& a, const Vec2& b);
};

struct Line3 {
    Vec3 point;
    Vec3 direction;
};

struct RigidMotion {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    Vec3 apply_direction(const Vec3& d) const { return rotation * d; }
    RigidMotion inverse() const;
    // (*this) after `first`.
    RigidMotion compose(const RigidMotion& first) const;

    static RigidMotion about_axis(const Vec3& axis_point, const Vec3& axis_dir, double angle);
    bool is_valid(double tol = 1e-10) const;
};

Vec3 rotate_about_axis(const Vec3& p, const Vec3& axis_point, const Vec3& axis_dir, double angle);

inline Vec2 project_orthogonal(const Vec3& p) { return {p.x(), p.y()}; }

Vec2 intersect_lines_2d(const Line2& a, const Line2& b);

struct PolylineCrossing {
    Vec2 point;
    double arc = 0.0;
    int segment = 0;
};

// Crossings of an infinite line with a polyline, ordered by arc length.
// Crossings through a shared vertex are reported once. A vertex within
// touch_tol of the line whose adjacent segments are not crossed counts as a
// crossing, so a line tangent to the curve at a sample is not lost to
// rounding.
std::vector<PolylineCrossing> line_polyline_crossings(const Line2& line, const std::vector<Vec2>& polyline,
                                                      double touch_tol = 0.0);

// Continuity rule: with a seed, the first crossing lying strictly after arc
// position `after`; without one, the crossing must be unique.
PolylineCrossing pick_crossing(const std::vector<PolylineCrossing>& crossings, std::optional<double> after);

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Wraps an angle into (-pi, pi].
double fold_angle(double a);
// Wraps an angle into [0, 2pi).
double wrap_two_pi(double a);

}  // namespace curverec
