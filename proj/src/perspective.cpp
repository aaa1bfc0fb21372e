#include "curverec/perspective.hpp"

#include <cmath>
#include <string>

#include "curverec/errors.hpp"
#include "curverec/random.hpp"

namespace curverec {

namespace {

// Distance, relative to |AB| in the image, within which a line tangent to the
// curve image still meets it at a sample.
constexpr double kTouchTolerance = 1e-7;

// Position of P along A -> B, with A at 0 and B at 1.
double chord_position(const Vec2& A, const Vec2& B, const Vec2& P) {
    const Vec2 ab = B - A;
    const double len2 = ab.squaredNorm();
    if (!(len2 > 0.0)) throw DegenerateError("A and B coincide");
    const double off = std::abs(cross2(ab, P - A)) / std::sqrt(len2);
    if (off > 1e-9 * std::max(1.0, std::sqrt(len2))) throw CollinearityError("point is off the line AB");
    return (P - A).dot(ab) / len2;
}

bool same_point(const Vec2& a, const Vec2& b) { return (a - b).norm() <= 1e-12 * (1.0 + a.norm()); }

// Traced points are vertices of the curve image; returns the vertex and its
// arc-length position.
PolylineCrossing vertex_crossing(const std::vector<Vec2>& polyline, const Vec2& P) {
    std::size_t best = 0;
    double arc = 0.0;
    double best_arc = 0.0;
    for (std::size_t i = 0; i < polyline.size(); ++i) {
        if (i > 0) arc += (polyline[i] - polyline[i - 1]).norm();
        if ((polyline[i] - P).norm() < (polyline[best] - P).norm()) {
            best = i;
            best_arc = arc;
        }
    }
    return {P, best_arc, static_cast<int>(best)};
}

template <class E>
[[noreturn]] void rethrow_with_index(const E& e, std::size_t k) {
    throw E("sample " + std::to_string(k) + ": " + e.what());
}

}  // namespace

void validate_view(const PlanarSceneView& view) {
    if (same_point(view.A, view.B)) throw PreconditionError("A and B coincide");
    const auto off = [](const Line2& l, const Vec2& p) { return std::abs(cross2(l.direction, p - l.point)); };
    if (off(view.tangent_line_at_A, view.A) > 1e-9 || off(view.tangent_line_at_B, view.B) > 1e-9)
        throw PreconditionError("tangent line does not pass through its traced point");
}

DerivedPoints construct_DE(const PlanarSceneView& view) {
    DerivedPoints out;
    out.D = intersect_lines_2d(view.tangent_line_at_A, view.tangent_line_at_B);
    out.E = intersect_lines_2d(Line2::between(view.A, view.B), Line2::between(out.D, view.C));
    return out;
}

double double_quotient(const Vec2& A, const Vec2& E, const Vec2& Y, const Vec2& B) {
    const double e = chord_position(A, B, E);
    const double y = chord_position(A, B, Y);
    constexpr double eps = 1e-14;
    if (std::abs(y) < eps || std::abs(y - 1.0) < eps) throw DegenerateError("Y coincides with A or B");
    if (std::abs(e - 1.0) < eps) throw DegenerateError("E coincides with B");
    return (e * (y - 1.0)) / (y * (e - 1.0));
}

Vec2 solve_Y_second(const ChordPoints& view1, const ChordPoints& view2, const Vec2& Y1) {
    const double e1 = chord_position(view1.A, view1.B, view1.E);
    const double y1 = chord_position(view1.A, view1.B, Y1);
    const double e2 = chord_position(view2.A, view2.B, view2.E);
    constexpr double eps = 1e-14;
    if (std::abs(e1 - 1.0) < eps || std::abs(e2 - 1.0) < eps) throw DegenerateError("E coincides with B");
    // Equal double quotients, solved for the position of Y2 in a form that
    // stays finite when Y1 reaches A1 or B1.
    const double num = e2 * y1 * (e1 - 1.0);
    const double den = num + e1 * (y1 - 1.0) * (1.0 - e2);
    if (std::abs(den) < eps * (std::abs(num) + std::abs(den - num))) throw DegenerateError("Y'' lies at infinity");
    return view2.A + (num / den) * (view2.B - view2.A);
}

PolylineCrossing correspond_crossing(const Vec2& X1, const PlanarSceneView& view1, const PlanarSceneView& view2,
                                     std::optional<double> after_arc) {
    if (same_point(X1, view1.A)) return vertex_crossing(view2.curve_image, view2.A);
    if (same_point(X1, view1.B)) return vertex_crossing(view2.curve_image, view2.B);
    if (same_point(X1, view1.C)) return vertex_crossing(view2.curve_image, view2.C);
    const DerivedPoints p1 = construct_DE(view1);
    const DerivedPoints p2 = construct_DE(view2);
    const Vec2 Y1 = intersect_lines_2d(Line2::between(view1.A, view1.B), Line2::between(p1.D, X1));
    const Vec2 Y2 = solve_Y_second({view1.A, p1.E, view1.B}, {view2.A, p2.E, view2.B}, Y1);
    const double touch = kTouchTolerance * (view2.B - view2.A).norm();
    return pick_crossing(line_polyline_crossings(Line2::between(p2.D, Y2), view2.curve_image, touch), after_arc);
}

Vec2 correspond_point(const Vec2& X1, const PlanarSceneView& view1, const PlanarSceneView& view2,
                      std::optional<double> after_arc) {
    return correspond_crossing(X1, view1, view2, after_arc).point;
}

std::vector<CorrespondencePair> correspond_curve(const PlanarSceneView& view1, const PlanarSceneView& view2) {
    validate_view(view1);
    validate_view(view2);
    construct_DE(view1);
    construct_DE(view2);
    std::vector<CorrespondencePair> out;
    std::optional<double> after;
    for (std::size_t k = 0; k < view1.curve_image.size(); ++k) {
        try {
            const PolylineCrossing x2 = correspond_crossing(view1.curve_image[k], view1, view2, after);
            out.push_back({static_cast<int>(k), view1.curve_image[k], x2.point});
            after = x2.arc;
        } catch (const NoIntersectionError& e) {
            rethrow_with_index(e, k);
        } catch (const AmbiguityError& e) {
            rethrow_with_index(e, k);
        } catch (const ParallelError& e) {
            rethrow_with_index(e, k);
        } catch (const DegenerateError& e) {
            rethrow_with_index(e, k);
        }
    }
    return out;
}

Vec2 PinholeCamera::project(const Vec3& X) const {
    const Vec3 x = rotation * (X - center);
    if (!(x.z() > 1e-9)) throw DegenerateError("point behind the camera");
    return {x.x() / x.z(), x.y() / x.z()};
}

namespace {

Mat3 random_rotation(Rng& rng, double max_angle) {
    Vec3 axis(rng.normal(), rng.normal(), rng.normal());
    axis.normalize();
    return Eigen::AngleAxisd(rng.uniform(-max_angle, max_angle), axis).toRotationMatrix();
}

}  // namespace

// Cubic arc from A to B whose end tangents meet at D, placed on a tilted
// plane in front of the origin.
PlanarCurve3 make_planar_curve(std::uint64_t seed, int samples) {
    if (samples < 8) throw RangeError("a curve needs at least 8 samples");
    Rng rng(seed);
    const Vec2 A(-1.0, 0.0);
    const Vec2 B(1.0, 0.0);
    const Vec2 D(rng.uniform(-0.3, 0.3), rng.uniform(0.8, 1.5));
    const Vec2 P1 = A + rng.uniform(0.4, 0.7) * (D - A);
    const Vec2 P2 = B + rng.uniform(0.4, 0.7) * (D - B);

    const Mat3 tilt = random_rotation(rng, 0.6);
    const Vec3 origin(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(4.5, 6.0));
    const auto embed = [&](const Vec2& p) { return Vec3(origin + tilt * Vec3(p.x(), p.y(), 0.0)); };

    PlanarCurve3 curve;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const double s = 1.0 - t;
        const Vec2 p = s * s * s * A + 3.0 * s * s * t * P1 + 3.0 * s * t * t * P2 + t * t * t * B;
        curve.samples.push_back(embed(p));
    }
    curve.samples.front() = embed(A);
    curve.samples.back() = embed(B);
    curve.c_index = samples / 2;
    curve.D = embed(D);
    return curve;
}

PlanarSceneView render_planar_view(const PlanarCurve3& curve, const PinholeCamera& camera) {
    PlanarSceneView view;
    for (const Vec3& X : curve.samples) view.curve_image.push_back(camera.project(X));
    view.A = view.curve_image.front();
    view.B = view.curve_image.back();
    view.C = view.curve_image[curve.c_index];
    const Vec2 D = camera.project(curve.D);
    view.tangent_line_at_A = Line2::between(view.A, D);
    view.tangent_line_at_A.point = view.A;
    view.tangent_line_at_B = Line2::between(view.B, D);
    view.tangent_line_at_B.point = view.B;
    return view;
}

PlanarFixture make_planar_fixture(std::uint64_t seed, int samples) {
    PlanarFixture f;
    f.curve = make_planar_curve(seed, samples);
    Rng rng(seed ^ 0xd1b54a32d192ed03ULL);
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& X : f.curve.samples) centroid += X;
    centroid /= static_cast<double>(f.curve.samples.size());

    f.camera2.center = Vec3(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-0.5, 0.5));
    const Vec3 z = (centroid - f.camera2.center).normalized();
    const Vec3 x = Vec3::UnitY().cross(z).normalized();
    const Vec3 y = z.cross(x);
    Mat3 look;
    look.row(0) = x;
    look.row(1) = y;
    look.row(2) = z;
    f.camera2.rotation = Eigen::AngleAxisd(rng.uniform(-0.5, 0.5), Vec3::UnitZ()).toRotationMatrix() * look;

    f.view1 = render_planar_view(f.curve, f.camera1);
    f.view2 = render_planar_view(f.curve, f.camera2);
    return f;
}

}  // namespace curverec
