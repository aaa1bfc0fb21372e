#pragma once

#include <vector>

#include "curverec/scene.hpp"

namespace curverec {

struct FrameObservation {
    double c_prime = 0.0;
    // Signed y-coordinate of D' on l1 (the y axis through A').
    double d_prime = 0.0;
    // Signed position of E' on l2 (the vertical through B'), measured from
    // B' along -y so that A and B play mirrored roles.
    double e_prime = 0.0;
    double tangent_angle_at_A_proj = 0.0;
    double tangent_angle_at_B_proj = 0.0;
    int frame_index = 0;
};

FrameImage normalize_frame(const FrameImage& img);

// Expects a normalized image (A' at the origin, B' on +x).
FrameObservation extract_observables(const FrameImage& img, int frame_index = 0);

// normalize_frame followed by extract_observables.
FrameObservation observe_frame(const FrameImage& img, int frame_index = 0);

// observe_frame on each image, indexed by position.
std::vector<FrameObservation> observe_frames(const std::vector<FrameImage>& images);

}  // namespace curverec
