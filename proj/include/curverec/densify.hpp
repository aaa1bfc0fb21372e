#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curverec/geometry.hpp"
#include "curverec/scene.hpp"
#include "curverec/solver.hpp"

namespace curverec {

struct RigidBasis {
    Vec3 origin = Vec3::Zero();
    Vec3 u = Vec3::UnitX();
    Vec3 v = Vec3::UnitY();
    Vec3 w = Vec3::UnitZ();

    Vec3 to_basis(const Vec3& X) const;
    Vec3 from_basis(const Vec3& p) const;
    Vec3 direction_to_basis(const Vec3& d) const;
    Vec3 direction_from_basis(const Vec3& q) const;
};

// f(t) = p + t q in basis coordinates.
struct BasisLine {
    Vec3 p = Vec3::Zero();
    Vec3 q = Vec3::UnitZ();
};

enum class MirrorFlag { unresolved, consistent, inconsistent };

const char* to_string(MirrorFlag f);
MirrorFlag mirror_flag_from_string(const std::string& s);

struct ReconstructedCurve {
    std::vector<Vec3> points;
    std::vector<int> source_image_indices;
    MirrorFlag mirror_flag = MirrorFlag::unresolved;
};

RigidBasis build_basis(const Vec3& A, const Vec3& B, const Vec3& C_dir);

BasisLine line_to_basis(const Line3& line, const RigidBasis& basis);
Line3 line_from_basis(const BasisLine& bl, const RigidBasis& basis);

// Rotation taking the canonical curve into the frame's coordinates, where A
// is the origin, the normalized image is the (x, y) plane and z is depth.
RigidMotion frame_motion(const FramePose& pose);

// Basis (A, AB, unit tangent at A) of the curve in the frame's coordinates.
RigidBasis frame_basis(const FramePose& pose, const CurveParams& params);

struct PointReconstruction {
    Vec3 X;
    Vec2 X1;
    double arc1 = 0.0;  // arc-length position of X1 along frame 1's image
};

// frame1_image must be normalized. The result is in frame-0 coordinates.
PointReconstruction reconstruct_point(const Vec2& X0, const FramePose& frame0_pose, const FramePose& frame1_pose,
                                      const FrameImage& frame1_image, const CurveParams& params,
                                      std::optional<double> after_arc = std::nullopt);

// Images must be normalized; one pose per image. Uses frames 0 and 1, and
// checks the result against frame 2 when present.
ReconstructedCurve reconstruct_curve(const std::vector<FrameImage>& frame_images, const std::vector<FramePose>& poses,
                                     const CurveParams& params);

// Normalizes the images and reconstructs with the poses and parameters of a
// solution; poses are matched to images by frame index.
ReconstructedCurve reconstruct_from_solution(const std::vector<FrameImage>& frame_images, const SolveReport& solution);

// Largest spacing between consecutive points divided by the median spacing.
double max_spacing_ratio(const std::vector<Vec3>& points);

}  // namespace curverec
