#include "curverec/densify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curverec/errors.hpp"
#include "curverec/observe.hpp"

namespace curverec {

namespace {

// Distance, relative to the curve size, within which a line tangent to an
// image polyline still meets it at a sample.
constexpr double kTouchTolerance = 1e-7;

Mat3 basis_matrix(const RigidBasis& b) {
    Mat3 m;
    m.col(0) = b.u;
    m.col(1) = b.v;
    m.col(2) = b.w;
    return m;
}

void check_not_coplanar(const CurveParams& params) {
    if (std::abs(std::sin(params.phi)) < 1e-9) throw CoplanarError("tangents at A and B are coplanar");
}

// Parameter t of the point on line a closest to line b.
double closest_parameter(const Line3& a, const Line3& b) {
    const Vec3 w0 = a.point - b.point;
    const double aa = a.direction.dot(a.direction);
    const double ab = a.direction.dot(b.direction);
    const double bb = b.direction.dot(b.direction);
    const double den = aa * bb - ab * ab;
    if (den <= 1e-14 * aa * bb) throw NoIntersectionError("back-projected rays are parallel (no parallax)");
    return (ab * b.direction.dot(w0) - bb * a.direction.dot(w0)) / den;
}

template <class E>
[[noreturn]] void rethrow_with_index(const E& e, std::size_t k) {
    throw E("sample " + std::to_string(k) + ": " + e.what());
}

}  // namespace

Vec3 RigidBasis::to_basis(const Vec3& X) const { return basis_matrix(*this).partialPivLu().solve(X - origin); }

Vec3 RigidBasis::from_basis(const Vec3& p) const { return origin + basis_matrix(*this) * p; }

Vec3 RigidBasis::direction_to_basis(const Vec3& d) const { return basis_matrix(*this).partialPivLu().solve(d); }

Vec3 RigidBasis::direction_from_basis(const Vec3& q) const { return basis_matrix(*this) * q; }

const char* to_string(MirrorFlag f) {
    switch (f) {
        case MirrorFlag::unresolved: return "unresolved";
        case MirrorFlag::consistent: return "consistent";
        case MirrorFlag::inconsistent: return "inconsistent";
    }
    return "unresolved";
}

MirrorFlag mirror_flag_from_string(const std::string& s) {
    if (s == "unresolved") return MirrorFlag::unresolved;
    if (s == "consistent") return MirrorFlag::consistent;
    if (s == "inconsistent") return MirrorFlag::inconsistent;
    throw FormatError("unknown mirror flag '" + s + "'");
}

RigidBasis build_basis(const Vec3& A, const Vec3& B, const Vec3& C_dir) {
    RigidBasis b;
    b.origin = A;
    b.u = B - A;
    b.v = C_dir;
    b.w = b.u.cross(b.v);
    if (b.w.norm() < 1e-9 * b.u.norm() * b.v.norm()) throw CoplanarError("tangent at A is parallel to AB");
    return b;
}

BasisLine line_to_basis(const Line3& line, const RigidBasis& basis) {
    return {basis.to_basis(line.point), basis.direction_to_basis(line.direction)};
}

Line3 line_from_basis(const BasisLine& bl, const RigidBasis& basis) {
    return {basis.from_basis(bl.p), basis.direction_from_basis(bl.q)};
}

RigidMotion frame_motion(const FramePose& pose) {
    RigidMotion m = canonical_motion(pose.delta, pose.tau);
    if (pose.depth_sign == DepthSign::back) {
        const Mat3 flip = Vec3(1.0, 1.0, -1.0).asDiagonal();
        m.rotation = flip * m.rotation * flip;
    }
    return m;
}

RigidBasis frame_basis(const FramePose& pose, const CurveParams& params) {
    const RigidMotion m = frame_motion(pose);
    return build_basis(Vec3::Zero(), m.apply(Vec3(params.c, 0.0, 0.0)),
                       m.apply_direction(canonical_tangent_at_A(params)));
}

PointReconstruction reconstruct_point(const Vec2& X0, const FramePose& frame0_pose, const FramePose& frame1_pose,
                                      const FrameImage& frame1_image, const CurveParams& params,
                                      std::optional<double> after_arc) {
    check_not_coplanar(params);
    const RigidBasis basis0 = frame_basis(frame0_pose, params);
    const RigidBasis basis1 = frame_basis(frame1_pose, params);

    // Vertical line x through X0, carried to frame 1 by its basis coordinates.
    const Line3 x{Vec3(X0.x(), X0.y(), 0.0), Vec3::UnitZ()};
    const Line3 x_in_1 = line_from_basis(line_to_basis(x, basis0), basis1);
    const Vec2 dir = project_orthogonal(x_in_1.direction);
    if (dir.norm() < 1e-12) throw NoIntersectionError("transported line projects to a point (no parallax)");
    const Line2 image_line = Line2::through(project_orthogonal(x_in_1.point), dir);
    const PolylineCrossing X1 = pick_crossing(
        line_polyline_crossings(image_line, frame1_image.projected_samples, kTouchTolerance * params.c), after_arc);

    // Back-projected ray of X1, carried back to frame 0, meets x at X.
    const Line3 ray{Vec3(X1.point.x(), X1.point.y(), 0.0), Vec3::UnitZ()};
    const Line3 ray_in_0 = line_from_basis(line_to_basis(ray, basis1), basis0);
    const double t = closest_parameter(x, ray_in_0);
    return {x.point + t * x.direction, X1.point, X1.arc};
}

double max_spacing_ratio(const std::vector<Vec3>& points) {
    if (points.size() < 3) return 1.0;
    std::vector<double> gaps;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) gaps.push_back((points[i + 1] - points[i]).norm());
    std::vector<double> sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    return *std::max_element(gaps.begin(), gaps.end()) / median;
}

namespace {

std::vector<Vec3> reconstruct_pair(const std::vector<FrameImage>& images, const std::vector<FramePose>& poses,
                                   std::size_t other, const CurveParams& params) {
    const std::vector<Vec2>& samples = images[0].projected_samples;
    const RigidMotion m0 = frame_motion(poses[0]);
    std::vector<Vec3> points;
    points.reserve(samples.size());
    points.push_back(Vec3::Zero());
    double after = 0.0;
    for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
        try {
            const PointReconstruction r =
                reconstruct_point(samples[k], poses[0], poses[other], images[other], params, after);
            points.push_back(r.X);
            after = r.arc1;
        } catch (const NoIntersectionError& e) {
            rethrow_with_index(e, k);
        } catch (const AmbiguityError& e) {
            rethrow_with_index(e, k);
        } catch (const CoplanarError& e) {
            rethrow_with_index(e, k);
        }
    }
    points.push_back(m0.apply(Vec3(params.c, 0.0, 0.0)));
    return points;
}

}  // namespace

ReconstructedCurve reconstruct_curve(const std::vector<FrameImage>& frame_images, const std::vector<FramePose>& poses,
                                     const CurveParams& params) {
    if (frame_images.size() < 2) throw PreconditionError("densification needs at least two frames");
    if (poses.size() != frame_images.size()) throw PreconditionError("one pose per frame is required");
    if (frame_images[0].projected_samples.size() < 2) throw PreconditionError("frame 0 has no curve samples");
    check_not_coplanar(params);

    ReconstructedCurve out;
    out.points = reconstruct_pair(frame_images, poses, 1, params);
    for (std::size_t k = 0; k < out.points.size(); ++k) out.source_image_indices.push_back(static_cast<int>(k));

    const double ratio = max_spacing_ratio(out.points);
    if (ratio > 5.0)
        throw AmbiguityError("continuity violated: spacing " + std::to_string(ratio) + " times the median");

    if (frame_images.size() >= 3) {
        out.mirror_flag = MirrorFlag::inconsistent;
        try {
            const std::vector<Vec3> check = reconstruct_pair(frame_images, poses, 2, params);
            double worst = 0.0;
            for (std::size_t k = 0; k < check.size(); ++k)
                worst = std::max(worst, (check[k] - out.points[k]).norm());
            if (worst <= 1e-6 * params.c) out.mirror_flag = MirrorFlag::consistent;
        } catch (const Error&) {
        }
    }
    return out;
}

ReconstructedCurve reconstruct_from_solution(const std::vector<FrameImage>& frame_images, const SolveReport& solution) {
    std::vector<FrameImage> normalized;
    std::vector<FramePose> poses;
    for (const FramePose& pose : solution.per_frame) {
        if (pose.frame_index < 0 || pose.frame_index >= static_cast<int>(frame_images.size()))
            throw PreconditionError("pose refers to a missing frame");
        normalized.push_back(normalize_frame(frame_images[pose.frame_index]));
        poses.push_back(pose);
    }
    return reconstruct_curve(normalized, poses, solution.params);
}

}  // namespace curverec
