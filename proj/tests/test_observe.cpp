#include <doctest.h>

#include <numbers>

#include "curverec/errors.hpp"
#include "curverec/observe.hpp"
#include "curverec/random.hpp"
#include "helpers.hpp"

using namespace curverec;

constexpr double kPi = std::numbers::pi;

namespace {

void check_same(const FrameObservation& a, const FrameObservation& b, double tol) {
    CHECK(std::abs(a.c_prime - b.c_prime) < tol);
    CHECK(std::abs(a.d_prime - b.d_prime) < tol);
    CHECK(std::abs(a.e_prime - b.e_prime) < tol);
}

}  // namespace

TEST_SUITE("observe") {
    TEST_CASE("normalization of a canonical image is the identity") {
        const FrameImage img = render_frame(apply_canonical_motion(make_test_curve(1, {1.2, 0.5, 0.7, 2.0}), 0.5, 0.3));
        const FrameImage n = normalize_frame(img);
        for (std::size_t i = 0; i < img.projected_samples.size(); ++i)
            CHECK((n.projected_samples[i] - img.projected_samples[i]).norm() < 1e-15);
        CHECK((n.tangent_dir_at_A_proj - img.tangent_dir_at_A_proj).norm() < 1e-15);
    }

    TEST_CASE("normalization undoes translation") {
        const FrameImage img = render_frame(apply_canonical_motion(make_test_curve(2, {1.2, 0.5, 0.7, 2.0}), 0.5, 0.3));
        const FrameImage moved = normalize_frame(apply_inplane(img, 0.0, {3.0, 4.0}));
        const FrameImage base = normalize_frame(img);
        for (std::size_t i = 0; i < img.projected_samples.size(); ++i)
            CHECK((moved.projected_samples[i] - base.projected_samples[i]).norm() < 1e-14);
        CHECK(moved.A_proj == Vec2::Zero());
        CHECK(moved.B_proj.y() == 0.0);
    }

    TEST_CASE("observables are invariant under in-plane isometries") {
        Rng rng(31);
        for (int i = 0; i < 100; ++i) {
            const CurveParams p = random_params(rng);
            const FrameImage img =
                render_frame(apply_canonical_motion(make_test_curve(i, p), rng.uniform(0.1, 3.0), rng.uniform(0.1, 1.4)));
            const FrameObservation base = observe_frame(img);
            check_same(observe_frame(apply_inplane(img, 1.1, Vec2::Zero())), base, 1e-10);
            check_same(observe_frame(apply_inplane(img, rng.uniform(0, 2 * kPi), {rng.uniform(-5, 5), rng.uniform(-5, 5)})),
                       base, 1e-10);
        }
    }

    TEST_CASE("in-plane curve: c' = c and |d'| = c tan(alpha)") {
        const FrameImage img = render_frame(make_test_curve(3, {1.0, kPi / 4, 0.6, 1.0}));
        const FrameObservation o = observe_frame(img);
        CHECK(o.c_prime == doctest::Approx(1.0));
        CHECK(std::abs(o.d_prime) == doctest::Approx(1.0));
    }

    TEST_CASE("observables at c=1.5, alpha=0.6, beta=0.8, phi=1.0, delta=0.4, tau=0.7") {
        // Frozen from tests/oracles/frozen_values.py: posed tangent lines
        // intersected with the verticals through A' and B'.
        const Curve3 c = make_test_curve(4, {1.5, 0.6, 0.8, 1.0});
        const FrameObservation o = observe_frame(render_frame(apply_canonical_motion(c, 0.4, 0.7)));
        CHECK(o.c_prime == doctest::Approx(1.1472632809267327).epsilon(1e-12));
        CHECK(o.d_prime == doctest::Approx(0.77196885242034197).epsilon(1e-12));
        CHECK(o.e_prime == doctest::Approx(0.14154119316220778).epsilon(1e-12));
        // Same point D' as the derivation trace.
        CHECK(std::abs(std::abs(o.d_prime) - std::abs(derivation_trace(c, 0.4, 0.7).AD_p)) < 1e-9);
    }

    TEST_CASE("c' = c cos tau and |d'| = AD' on random frames") {
        Rng rng(32);
        for (int i = 0; i < 200; ++i) {
            const CurveParams p = random_params(rng);
            const Curve3 c = make_test_curve(i, p);
            const double delta = rng.uniform(0.05, kPi - 0.05);
            const double tau = rng.uniform(0.05, kPi / 2 - 0.05);
            const FrameObservation o = observe_frame(render_frame(apply_canonical_motion(c, delta, tau)));
            CHECK(std::abs(o.c_prime - p.c * std::cos(tau)) < 1e-10);
            const double ad = derivation_trace(c, delta, tau).AD_p;
            CHECK(std::abs(std::abs(o.d_prime) - std::abs(ad)) < 1e-9 * std::max(1.0, std::abs(ad)));
        }
    }

    TEST_CASE("tangent parallel to the verticals") {
        FrameImage img;
        img.projected_samples = {{0, 0}, {0.5, 0.3}, {1, 0}};
        img.A_proj = {0, 0};
        img.B_proj = {1, 0};
        img.tangent_dir_at_A_proj = Vec2(1, 1).normalized();
        img.tangent_dir_at_B_proj = Vec2::UnitY();
        CHECK_THROWS_AS(extract_observables(img), ParallelError);
        img.tangent_dir_at_B_proj = Vec2(1, -1).normalized();
        img.tangent_dir_at_A_proj = Vec2::UnitY();
        CHECK_THROWS_AS(extract_observables(img), ParallelError);
    }

    TEST_CASE("preconditions") {
        FrameImage img;
        img.projected_samples = {{1, 1}, {1, 1}};
        img.A_proj = {1, 1};
        img.B_proj = {1, 1};
        CHECK_THROWS_AS(normalize_frame(img), DegenerateError);
        img.B_proj = {2, 2};
        CHECK_THROWS_AS(extract_observables(img), PreconditionError);
    }
}
