#pragma once

#include <string>

#include "curverec/densify.hpp"
#include "curverec/scene.hpp"

namespace curverec {

// Curve image, traced points and tangent lines of one frame.
std::string frame_svg(const FrameImage& frame, int index);

// Reconstructed points seen along z (left) and along y (right).
std::string reconstruction_svg(const ReconstructedCurve& curve);

}  // namespace curverec
