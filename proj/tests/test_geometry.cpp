#include <doctest.h>

#include <numbers>

#include "curverec/errors.hpp"
#include "curverec/geometry.hpp"
#include "helpers.hpp"

using namespace curverec;
using curverec::test::random_unit;
using curverec::test::random_vec3;

constexpr double kPi = std::numbers::pi;

TEST_SUITE("geometry") {
    TEST_CASE("quarter turns about coordinate axes") {
        const Vec3 z = rotate_about_axis({0, 1, 0}, Vec3::Zero(), Vec3::UnitZ(), kPi / 2);
        CHECK((z - Vec3(-1, 0, 0)).norm() < 1e-15);
        const Vec3 x = rotate_about_axis({0, 1, 0}, Vec3::Zero(), Vec3::UnitX(), kPi / 2);
        CHECK((x - Vec3(0, 0, 1)).norm() < 1e-15);
    }

    TEST_CASE("zero angle is the identity") {
        Rng rng(3);
        for (int i = 0; i < 20; ++i) {
            const Vec3 p = random_vec3(rng, 5.0);
            CHECK((rotate_about_axis(p, random_vec3(rng), random_unit(rng), 0.0) - p).norm() < 1e-14);
        }
    }

    TEST_CASE("rotation about an offset axis fixes the axis") {
        const Vec3 q(1, 2, 3);
        const Vec3 d = Vec3(1, 1, 0).normalized();
        CHECK((rotate_about_axis(q + 2.5 * d, q, d, 1.3) - (q + 2.5 * d)).norm() < 1e-14);
        // (0,0,0) about the vertical through (1,0,0) by pi lands on (2,0,0).
        CHECK((rotate_about_axis(Vec3::Zero(), {1, 0, 0}, Vec3::UnitZ(), kPi) - Vec3(2, 0, 0)).norm() < 1e-15);
    }

    TEST_CASE("rotation preserves distances") {
        Rng rng(11);
        for (int i = 0; i < 200; ++i) {
            const Vec3 p = random_vec3(rng, 4.0);
            const Vec3 q = random_vec3(rng, 4.0);
            const Vec3 a = random_vec3(rng);
            const Vec3 d = random_unit(rng);
            const double t = rng.uniform(-7.0, 7.0);
            const double before = (p - q).norm();
            const double after = (rotate_about_axis(p, a, d, t) - rotate_about_axis(q, a, d, t)).norm();
            CHECK(std::abs(after - before) < 1e-10);
        }
    }

    TEST_CASE("rotations about one axis compose additively") {
        Rng rng(12);
        for (int i = 0; i < 200; ++i) {
            const Vec3 p = random_vec3(rng, 4.0);
            const Vec3 a = random_vec3(rng);
            const Vec3 d = random_unit(rng);
            const double t1 = rng.uniform(-4.0, 4.0);
            const double t2 = rng.uniform(-4.0, 4.0);
            const Vec3 twice = rotate_about_axis(rotate_about_axis(p, a, d, t1), a, d, t2);
            CHECK((twice - rotate_about_axis(p, a, d, t1 + t2)).norm() < 1e-10);
        }
    }

    TEST_CASE("rigid motion helpers agree with rotate_about_axis") {
        Rng rng(13);
        const Vec3 a = random_vec3(rng);
        const Vec3 d = random_unit(rng);
        const RigidMotion m = RigidMotion::about_axis(a, d, 0.8);
        CHECK(m.is_valid());
        const Vec3 p = random_vec3(rng, 3.0);
        CHECK((m.apply(p) - rotate_about_axis(p, a, d, 0.8)).norm() < 1e-14);
        CHECK((m.inverse().apply(m.apply(p)) - p).norm() < 1e-14);
        const RigidMotion n = RigidMotion::about_axis(random_vec3(rng), random_unit(rng), -1.1);
        CHECK((n.compose(m).apply(p) - n.apply(m.apply(p))).norm() < 1e-14);
    }

    TEST_CASE("orthogonal projection drops z") {
        CHECK(project_orthogonal({1, 2, 3}) == Vec2(1, 2));
        CHECK(project_orthogonal({0, 0, 5}) == Vec2(0, 0));
        Rng rng(14);
        for (int i = 0; i < 50; ++i) {
            const Vec3 p = random_vec3(rng, 3.0);
            CHECK(project_orthogonal(p + Vec3(0, 0, rng.uniform(-9, 9))) == project_orthogonal(p));
        }
    }

    TEST_CASE("line intersections") {
        const Line2 x_axis{Vec2::Zero(), Vec2::UnitX()};
        const Line2 y_axis{Vec2::Zero(), Vec2::UnitY()};
        CHECK(intersect_lines_2d(x_axis, y_axis).norm() < 1e-15);
        const Vec2 p = intersect_lines_2d(Line2::between({0, 0}, {1, 1}), Line2::between({0, 2}, {2, 0}));
        CHECK((p - Vec2(1, 1)).norm() < 1e-15);
        CHECK_THROWS_AS(intersect_lines_2d(x_axis, Line2::through({0, 1}, {3, 0})), ParallelError);
        CHECK_THROWS_AS(Line2::through({0, 0}, {0, 0}), DegenerateError);
    }

    TEST_CASE("angle wrapping") {
        CHECK(fold_angle(kPi) == doctest::Approx(kPi));
        CHECK(fold_angle(-kPi) == doctest::Approx(kPi));
        CHECK(fold_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
        CHECK(wrap_two_pi(-0.5) == doctest::Approx(2 * kPi - 0.5));
        CHECK(wrap_two_pi(2 * kPi) == doctest::Approx(0.0));
    }

    TEST_CASE("polyline crossings are ordered and merged at vertices") {
        const std::vector<Vec2> zigzag = {{0, 0}, {1, 1}, {2, 0}, {3, 1}};
        const auto hits = line_polyline_crossings(Line2::through({0, 0.5}, {1, 0}), zigzag);
        REQUIRE(hits.size() == 3);
        CHECK(hits[0].point.x() == doctest::Approx(0.5));
        CHECK(hits[1].point.x() == doctest::Approx(1.5));
        CHECK(hits[2].point.x() == doctest::Approx(2.5));
        CHECK(hits[0].arc < hits[1].arc);

        // A line through the vertex (1, 1) crosses there once.
        const auto vertex = line_polyline_crossings(Line2::through({1, 0}, {0, 1}), zigzag);
        REQUIRE(vertex.size() == 1);
        CHECK((vertex[0].point - Vec2(1, 1)).norm() < 1e-12);
    }

    TEST_CASE("a line grazing a vertex") {
        const std::vector<Vec2> zigzag = {{0, 0}, {1, 1}, {2, 0}, {3, 1}};
        // Horizontal line just above the peak at (1, 1).
        const Line2 grazing = Line2::through({0, 1.0 + 1e-11}, {1, 0});
        CHECK(line_polyline_crossings(grazing, zigzag).empty());
        const auto touched = line_polyline_crossings(grazing, zigzag, 1e-9);
        REQUIRE(touched.size() == 2);
        CHECK(touched[0].point == Vec2(1, 1));
        CHECK(touched[0].arc == doctest::Approx(std::sqrt(2.0)));
        CHECK(touched[1].point == Vec2(3, 1));
        CHECK(line_polyline_crossings(Line2::through({0, 1.0 + 1e-6}, {1, 0}), zigzag, 1e-9).empty());
        // Crossed segments keep their own crossing and add no touch.
        CHECK(line_polyline_crossings(Line2::through({0, 0.5}, {1, 0}), zigzag, 1e-9).size() == 3);
    }

    TEST_CASE("crossing selection") {
        const std::vector<Vec2> zigzag = {{0, 0}, {1, 1}, {2, 0}, {3, 1}};
        const auto hits = line_polyline_crossings(Line2::through({0, 0.5}, {1, 0}), zigzag);
        CHECK_THROWS_AS(pick_crossing(hits, std::nullopt), AmbiguityError);
        CHECK(pick_crossing(hits, hits[0].arc).point.x() == doctest::Approx(1.5));
        CHECK_THROWS_AS(pick_crossing(hits, hits[2].arc), NoIntersectionError);
        CHECK_THROWS_AS(pick_crossing({}, std::nullopt), NoIntersectionError);
    }
}
