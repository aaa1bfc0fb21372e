#include "curverec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "curverec/errors.hpp"

namespace curverec {

namespace {

constexpr double kSegmentTolerance = 1e-12;

}  // namespace

Line2 Line2::through(const Vec2& point, const Vec2& dir) {
    const double n = dir.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateError("line direction is zero");
    return {point, dir / n};
}

Line2 Line2::between(const Vec2& a, const Vec2& b) { return through(a, b - a); }

RigidMotion RigidMotion::inverse() const {
    RigidMotion inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(inv.rotation * translation);
    return inv;
}

RigidMotion RigidMotion::compose(const RigidMotion& first) const {
    RigidMotion out;
    out.rotation = rotation * first.rotation;
    out.translation = rotation * first.translation + translation;
    return out;
}

RigidMotion RigidMotion::about_axis(const Vec3& axis_point, const Vec3& axis_dir, double angle) {
    RigidMotion m;
    m.rotation = Eigen::AngleAxisd(angle, axis_dir.normalized()).toRotationMatrix();
    m.translation = axis_point - m.rotation * axis_point;
    return m;
}

bool RigidMotion::is_valid(double tol) const {
    const double ortho = (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
    return ortho <= tol && std::abs(rotation.determinant() - 1.0) <= tol && translation.allFinite();
}

// Rodrigues' formula applied to p - axis_point.
Vec3 rotate_about_axis(const Vec3& p, const Vec3& axis_point, const Vec3& axis_dir, double angle) {
    const Vec3 v = p - axis_point;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Vec3 r = v * c + axis_dir.cross(v) * s + axis_dir * (axis_dir.dot(v) * (1.0 - c));
    return axis_point + r;
}

Vec2 intersect_lines_2d(const Line2& a, const Line2& b) {
    const double den = cross2(a.direction, b.direction);
    if (std::abs(den) < kParallelTolerance) throw ParallelError("lines are parallel");
    const double t = cross2(b.point - a.point, b.direction) / den;
    return a.point + t * a.direction;
}

double fold_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(a, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

double wrap_two_pi(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

std::vector<PolylineCrossing> line_polyline_crossings(const Line2& line, const std::vector<Vec2>& polyline,
                                                      double touch_tol) {
    std::vector<PolylineCrossing> out;
    const std::size_t n = polyline.size();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) total += (polyline[i + 1] - polyline[i]).norm();
    const double merge = 1e-9 * std::max(total, 1e-300);
    const auto add = [&](const PolylineCrossing& c) {
        if (out.empty() || std::abs(c.arc - out.back().arc) > merge) out.push_back(c);
    };
    const auto touches = [&](std::size_t i) {
        return touch_tol > 0.0 && std::abs(cross2(line.direction, polyline[i] - line.point)) <= touch_tol;
    };
    double arc = 0.0;
    bool crossed_before = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Vec2& a = polyline[i];
        const Vec2 e = polyline[i + 1] - a;
        const double len = e.norm();
        const double den = cross2(e, line.direction);
        std::optional<PolylineCrossing> hit;
        if (std::abs(den) > 1e-15 * len) {
            const double s = cross2(line.point - a, line.direction) / den;
            if (s >= -kSegmentTolerance && s <= 1.0 + kSegmentTolerance) {
                const double sc = std::clamp(s, 0.0, 1.0);
                hit = PolylineCrossing{a + sc * e, arc + sc * len, static_cast<int>(i)};
            }
        }
        if (!hit && !crossed_before && touches(i)) add({a, arc, static_cast<int>(i)});
        if (hit) add(*hit);
        crossed_before = hit.has_value();
        arc += len;
    }
    if (n >= 2 && !crossed_before && touches(n - 1)) add({polyline[n - 1], arc, static_cast<int>(n - 2)});
    return out;
}

PolylineCrossing pick_crossing(const std::vector<PolylineCrossing>& crossings, std::optional<double> after) {
    if (crossings.empty()) throw NoIntersectionError("line misses the curve image");
    if (!after) {
        if (crossings.size() > 1)
            throw AmbiguityError(std::to_string(crossings.size()) + " crossings and no continuity seed");
        return crossings.front();
    }
    const double floor = *after + 1e-12 * (1.0 + std::abs(*after));
    for (const PolylineCrossing& c : crossings)
        if (c.arc > floor) return c;
    throw NoIntersectionError("no crossing beyond the previous one");
}

}  // namespace curverec
