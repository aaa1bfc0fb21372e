#include "curverec/observe.hpp"

#include <cmath>

#include "curverec/errors.hpp"

namespace curverec {

FrameImage normalize_frame(const FrameImage& img) {
    const Vec2 ab = img.B_proj - img.A_proj;
    const double len = ab.norm();
    if (!(len > 1e-12)) throw DegenerateError("projection collapses AB");
    const double rot = -std::atan2(ab.y(), ab.x());
    const double c = std::cos(rot);
    const double s = std::sin(rot);
    const auto map_dir = [&](const Vec2& v) { return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y()); };
    const auto map_pt = [&](const Vec2& p) { return map_dir(p - img.A_proj); };

    FrameImage out;
    out.projected_samples.reserve(img.projected_samples.size());
    for (const Vec2& p : img.projected_samples) out.projected_samples.push_back(map_pt(p));
    out.A_proj = Vec2::Zero();
    out.B_proj = Vec2(len, 0.0);
    if (!out.projected_samples.empty()) {
        out.projected_samples.front() = out.A_proj;
        out.projected_samples.back() = out.B_proj;
    }
    out.tangent_dir_at_A_proj = map_dir(img.tangent_dir_at_A_proj);
    out.tangent_dir_at_B_proj = map_dir(img.tangent_dir_at_B_proj);
    return out;
}

FrameObservation extract_observables(const FrameImage& img, int frame_index) {
    const double c_prime = img.B_proj.x();
    if (img.A_proj.norm() > 1e-9 || std::abs(img.B_proj.y()) > 1e-9 || !(c_prime > 0.0))
        throw PreconditionError("image is not normalized");

    const Line2 l1{Vec2::Zero(), Vec2::UnitY()};
    const Line2 l2{img.B_proj, Vec2::UnitY()};
    const Vec2 D = intersect_lines_2d(Line2::through(img.B_proj, img.tangent_dir_at_B_proj), l1);
    const Vec2 E = intersect_lines_2d(Line2::through(img.A_proj, img.tangent_dir_at_A_proj), l2);

    FrameObservation obs;
    obs.c_prime = c_prime;
    obs.d_prime = D.y();
    obs.e_prime = -E.y();
    obs.tangent_angle_at_A_proj = std::atan2(img.tangent_dir_at_A_proj.y(), img.tangent_dir_at_A_proj.x());
    obs.tangent_angle_at_B_proj = std::atan2(img.tangent_dir_at_B_proj.y(), img.tangent_dir_at_B_proj.x());
    obs.frame_index = frame_index;
    return obs;
}

FrameObservation observe_frame(const FrameImage& img, int frame_index) {
    return extract_observables(normalize_frame(img), frame_index);
}

std::vector<FrameObservation> observe_frames(const std::vector<FrameImage>& images) {
    std::vector<FrameObservation> out;
    for (std::size_t i = 0; i < images.size(); ++i) out.push_back(observe_frame(images[i], static_cast<int>(i)));
    return out;
}

}  // namespace curverec
