#pragma once

#include <algorithm>
#include <cmath>

#include "curverec/geometry.hpp"
#include "curverec/random.hpp"
#include "curverec/scene.hpp"

namespace curverec::test {

inline Vec3 random_vec3(Rng& rng, double scale = 1.0) {
    return {rng.uniform(-scale, scale), rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
}

inline Vec3 random_unit(Rng& rng) {
    Vec3 v;
    do v = random_vec3(rng);
    while (v.norm() < 0.1);
    return v.normalized();
}

inline RigidMotion random_motion3(Rng& rng) {
    RigidMotion m = RigidMotion::about_axis(random_vec3(rng), random_unit(rng), rng.uniform(-3.0, 3.0));
    m.translation += random_vec3(rng, 2.0);
    return m;
}

inline double param_error(const CurveParams& a, const CurveParams& b) {
    return std::max({std::abs(a.c - b.c), std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta),
                     std::abs(fold_angle(a.phi - b.phi))});
}

}  // namespace curverec::test
