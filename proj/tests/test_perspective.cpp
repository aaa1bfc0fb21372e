#include <doctest.h>

#include "curverec/errors.hpp"
#include "curverec/perspective.hpp"
#include "curverec/random.hpp"

using namespace curverec;

namespace {

PlanarSceneView trivial_view() {
    PlanarSceneView v;
    v.A = {0, 0};
    v.B = {4, 0};
    v.C = {2, 3};
    v.tangent_line_at_A = Line2::through(v.A, {1, 1});
    v.tangent_line_at_B = Line2::through(v.B, {-1, 1});
    v.curve_image = {v.A, {1, 1.5}, v.C, {3, 1.5}, v.B};
    return v;
}

// Intersection of two coplanar 3D lines given by point pairs.
Vec3 meet(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    const Vec3 da = a1 - a0;
    const Vec3 db = b1 - b0;
    Eigen::Matrix<double, 3, 2> M;
    M << da, -db;
    const Vec2 st = M.colPivHouseholderQr().solve(b0 - a0);
    return a0 + st[0] * da;
}

Vec2 apply_h(const Mat3& H, const Vec2& p) {
    const Vec3 x = H * Vec3(p.x(), p.y(), 1.0);
    return {x.x() / x.z(), x.y() / x.z()};
}

}  // namespace

TEST_SUITE("perspective") {
    TEST_CASE("D and E by line algebra") {
        const DerivedPoints p = construct_DE(trivial_view());
        CHECK((p.D - Vec2(2, 2)).norm() < 1e-14);
        CHECK((p.E - Vec2(2, 0)).norm() < 1e-14);
    }

    TEST_CASE("parallel constructions") {
        PlanarSceneView v = trivial_view();
        v.tangent_line_at_B = Line2::through(v.B, {1, 1});
        CHECK_THROWS_AS(construct_DE(v), ParallelError);
        v = trivial_view();
        v.C = {5, 2};  // DC parallel to AB
        CHECK_THROWS_AS(construct_DE(v), ParallelError);
    }

    TEST_CASE("view validation") {
        PlanarSceneView v = trivial_view();
        CHECK_NOTHROW(validate_view(v));
        v.tangent_line_at_A = Line2::through({0, 1}, {1, 1});
        CHECK_THROWS_AS(validate_view(v), PreconditionError);
        v = trivial_view();
        v.B = v.A;
        CHECK_THROWS_AS(validate_view(v), PreconditionError);
    }

    TEST_CASE("D and E are projections of their 3D counterparts") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const PlanarFixture f = make_planar_fixture(seed);
            const Vec3& A = f.curve.samples.front();
            const Vec3& B = f.curve.samples.back();
            const Vec3& C = f.curve.samples[f.curve.c_index];
            const Vec3 E = meet(A, B, f.curve.D, C);
            for (const auto& [cam, view] : {std::pair{f.camera1, f.view1}, std::pair{f.camera2, f.view2}}) {
                const DerivedPoints p = construct_DE(view);
                CHECK((p.D - cam.project(f.curve.D)).norm() < 1e-9);
                CHECK((p.E - cam.project(E)).norm() < 1e-9);
            }
        }
    }

    TEST_CASE("double quotient values and invariance") {
        const Vec2 A(0, 0), E(1, 0), Y(2, 0), B(3, 0);
        CHECK(double_quotient(A, E, Y, B) == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(double_quotient(7 * A, 7 * E, 7 * Y, 7 * B) == doctest::Approx(0.25).epsilon(1e-15));
        CHECK_THROWS_AS(double_quotient(A, E, Vec2(2, 1), B), CollinearityError);
        CHECK_THROWS_AS(double_quotient(A, E, A, B), DegenerateError);
        CHECK_THROWS_AS(double_quotient(A, E, Y, A), DegenerateError);

        Rng rng(61);
        int tested = 0;
        while (tested < 200) {
            Mat3 H = Mat3::Identity();
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) H(a, b) += rng.uniform(-0.3, 0.3);
            const Vec2 o(rng.uniform(-1, 1), rng.uniform(-1, 1));
            const Vec2 d = Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1)).normalized();
            const double te = rng.uniform(0.1, 0.9);
            const double ty = rng.uniform(-0.5, 1.5);
            if (std::abs(ty) < 0.05 || std::abs(ty - 1.0) < 0.05) continue;
            const Vec2 pts[4] = {o, o + te * d, o + ty * d, o + d};
            bool finite = true;
            for (const Vec2& p : pts) finite = finite && std::abs((H * Vec3(p.x(), p.y(), 1.0)).z()) > 0.1;
            if (!finite) continue;
            const double before = double_quotient(pts[0], pts[1], pts[2], pts[3]);
            const double after = double_quotient(apply_h(H, pts[0]), apply_h(H, pts[1]), apply_h(H, pts[2]), apply_h(H, pts[3]));
            CHECK(std::abs(after - before) <= 1e-9 * std::max(1.0, std::abs(before)));
            ++tested;
        }
    }

    TEST_CASE("second-view chord point") {
        const ChordPoints v{{0, 0}, {1, 0}, {3, 0}};
        CHECK((solve_Y_second(v, v, {2, 0}) - Vec2(2, 0)).norm() < 1e-14);
        CHECK((solve_Y_second(v, v, {-1, 0}) - Vec2(-1, 0)).norm() < 1e-14);

        // Affine image of the line.
        const auto map = [](const Vec2& p) { return Vec2(1.0 + 2.0 * p.x(), -1.0 + 0.5 * p.x()); };
        const ChordPoints w{map(v.A), map(v.E), map(v.B)};
        CHECK((solve_Y_second(v, w, {2, 0}) - map({2, 0})).norm() < 1e-13);
        const Vec2 Y2 = solve_Y_second(v, w, {2.5, 0});
        CHECK(double_quotient(w.A, w.E, Y2, w.B) == doctest::Approx(double_quotient(v.A, v.E, {2.5, 0}, v.B)).epsilon(1e-12));
    }

    TEST_CASE("second-view chord point matches the camera projection") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const PlanarFixture f = make_planar_fixture(seed);
            const Vec3& A = f.curve.samples.front();
            const Vec3& B = f.curve.samples.back();
            const DerivedPoints p1 = construct_DE(f.view1);
            const DerivedPoints p2 = construct_DE(f.view2);
            for (std::size_t k = 3; k + 3 < f.curve.samples.size(); k += 7) {
                if (static_cast<int>(k) == f.curve.c_index) continue;
                const Vec3 Y = meet(A, B, f.curve.D, f.curve.samples[k]);
                const Vec2 Y2 = solve_Y_second({f.view1.A, p1.E, f.view1.B}, {f.view2.A, p2.E, f.view2.B},
                                                f.camera1.project(Y));
                CHECK((Y2 - f.camera2.project(Y)).norm() < 1e-8);
            }
        }
    }

    TEST_CASE("traced points map to themselves") {
        const PlanarFixture f = make_planar_fixture(3);
        CHECK((correspond_point(f.view1.A, f.view1, f.view2) - f.view2.A).norm() <= 1e-10);
        CHECK((correspond_point(f.view1.B, f.view1, f.view2) - f.view2.B).norm() <= 1e-10);
        CHECK((correspond_point(f.view1.C, f.view1, f.view2) - f.view2.C).norm() <= 1e-10);
    }

    TEST_CASE("identical views give the identity") {
        const PlanarFixture f = make_planar_fixture(4);
        for (const CorrespondencePair& p : correspond_curve(f.view1, f.view1)) CHECK((p.x2 - p.x1).norm() < 1e-10);
    }

    TEST_CASE("whole-curve correspondence against camera 2") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const PlanarFixture f = make_planar_fixture(seed);
            const std::vector<CorrespondencePair> pairs = correspond_curve(f.view1, f.view2);
            REQUIRE(pairs.size() == f.view1.curve_image.size());
            double worst = 0.0;
            for (const CorrespondencePair& p : pairs) {
                CHECK(p.index >= 0);
                worst = std::max(worst, (p.x2 - f.view2.curve_image[p.index]).norm());
            }
            CHECK(worst <= 1e-5);
            const std::size_t k = pairs.size() / 3;
            CHECK((pairs[k].x2 - f.camera2.project(f.curve.samples[k])).norm() < 1e-6);
        }
    }

    TEST_CASE("correspondence round trip") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const PlanarFixture f = make_planar_fixture(seed);
            const std::vector<CorrespondencePair> forward = correspond_curve(f.view1, f.view2);
            std::optional<double> after;
            for (const CorrespondencePair& p : forward) {
                const PolylineCrossing back = correspond_crossing(p.x2, f.view2, f.view1, after);
                CHECK((back.point - p.x1).norm() <= 1e-7);
                after = back.arc;
            }
        }
    }

    TEST_CASE("parallel construction in the second view") {
        const PlanarFixture f = make_planar_fixture(5);
        PlanarSceneView v2 = f.view2;
        v2.tangent_line_at_B = Line2::through(v2.B, v2.tangent_line_at_A.direction);
        CHECK_THROWS_AS(correspond_curve(f.view1, v2), ParallelError);
    }

    TEST_CASE("camera projection") {
        PinholeCamera cam;
        CHECK((cam.project({2, 4, 2}) - Vec2(1, 2)).norm() < 1e-15);
        CHECK_THROWS_AS(cam.project({0, 0, -1}), DegenerateError);
        CHECK_THROWS_AS(make_planar_curve(1, 4), RangeError);
    }
}
