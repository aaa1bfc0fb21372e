#include <doctest.h>

#include "curverec/densify.hpp"
#include "curverec/errors.hpp"
#include "curverec/observe.hpp"
#include "curverec/random.hpp"
#include "helpers.hpp"

using namespace curverec;
using curverec::test::random_motion3;
using curverec::test::random_unit;
using curverec::test::random_vec3;

namespace {

struct Posed {
    Scene scene;
    std::vector<FrameImage> images;  // normalized
    std::vector<FramePose> poses;
    Curve3 truth;                     // frame-0 coordinates
};

Posed posed_scene(std::uint64_t seed, int frames) {
    Posed s;
    s.scene = make_scene(seed, frames, true, 64);
    for (const FrameImage& img : render_scene(s.scene)) {
        s.images.push_back(normalize_frame(img));
        const int k = static_cast<int>(s.poses.size());
        s.poses.push_back(recover_frame_pose(observe_frame(img, k), s.scene.params).pose);
    }
    const FrameMotion& m0 = s.scene.motion.frames[0];
    s.truth = apply_canonical_motion(s.scene.curve, m0.delta, m0.tau);
    return s;
}

Vec3 mirror(const Vec3& p) { return {p.x(), p.y(), -p.z()}; }

double error_up_to_mirror(const std::vector<Vec3>& got, const std::vector<Vec3>& truth) {
    double direct = 0.0;
    double mirrored = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) {
        direct = std::max(direct, (got[k] - truth[k]).norm());
        mirrored = std::max(mirrored, (mirror(got[k]) - truth[k]).norm());
    }
    return std::min(direct, mirrored);
}

RigidBasis moved(const RigidBasis& b, const RigidMotion& m) {
    return {m.apply(b.origin), m.apply_direction(b.u), m.apply_direction(b.v), m.apply_direction(b.w)};
}

}  // namespace

TEST_SUITE("densify") {
    TEST_CASE("basis of the unit frame") {
        const RigidBasis b = build_basis(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY());
        CHECK(b.u == Vec3::UnitX());
        CHECK(b.v == Vec3::UnitY());
        CHECK(b.w == Vec3::UnitZ());
        CHECK(b.to_basis(Vec3::Zero()).norm() == 0.0);
        CHECK_THROWS_AS(build_basis(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitX()), CoplanarError);
    }

    TEST_CASE("basis coordinates round trip") {
        Rng rng(21);
        for (int i = 0; i < 50; ++i) {
            const RigidBasis b = build_basis(random_vec3(rng), random_vec3(rng, 2.0), random_unit(rng));
            const Vec3 p = random_vec3(rng, 3.0);
            CHECK((b.to_basis(b.from_basis(p)) - p).norm() < 1e-10);
            CHECK(b.to_basis(b.origin).norm() < 1e-12);
        }
    }

    TEST_CASE("lines in basis coordinates") {
        const RigidBasis unit = build_basis(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY());
        const BasisLine z = line_to_basis({Vec3::Zero(), Vec3::UnitZ()}, unit);
        CHECK(z.p.norm() == 0.0);
        CHECK(z.q == Vec3::UnitZ());

        Rng rng(22);
        for (int i = 0; i < 50; ++i) {
            const RigidBasis b = build_basis(random_vec3(rng), random_vec3(rng, 2.0), random_unit(rng));
            const Line3 line{random_vec3(rng, 3.0), random_unit(rng)};
            const Line3 back = line_from_basis(line_to_basis(line, b), b);
            CHECK(back.direction.normalized().cross(line.direction).norm() < 1e-10);
            CHECK((back.point - line.point).cross(line.direction).norm() < 1e-10);
        }
    }

    TEST_CASE("transport between bases equals applying the motion") {
        Rng rng(23);
        for (int i = 0; i < 50; ++i) {
            const RigidBasis b0 = build_basis(random_vec3(rng), random_vec3(rng, 2.0), random_unit(rng));
            const RigidMotion m = random_motion3(rng);
            const Line3 line{random_vec3(rng, 3.0), random_unit(rng)};
            const Line3 carried = line_from_basis(line_to_basis(line, b0), moved(b0, m));
            CHECK((carried.point - m.apply(line.point)).norm() < 1e-10);
            CHECK((carried.direction - m.apply_direction(line.direction)).norm() < 1e-10);
        }
    }

    TEST_CASE("basis coordinates are rigid") {
        Rng rng(24);
        for (int i = 0; i < 100; ++i) {
            const RigidBasis b = build_basis(random_vec3(rng), random_vec3(rng, 2.0), random_unit(rng));
            const RigidMotion m = random_motion3(rng);
            const Vec3 X = random_vec3(rng, 3.0);
            CHECK((moved(b, m).to_basis(m.apply(X)) - b.to_basis(X)).norm() < 1e-10);
        }
    }

    TEST_CASE("frame basis follows the frame motion") {
        const CurveParams params{1.3, 0.6, 0.9, 2.0};
        const FramePose pose{0.8, 0.5, Branch::plus, DepthSign::front, 0};
        const RigidBasis b = frame_basis(pose, params);
        const RigidMotion m = canonical_motion(0.8, 0.5);
        CHECK(b.origin.norm() == 0.0);
        CHECK((b.u - m.apply(Vec3(1.3, 0, 0))).norm() < 1e-14);
        CHECK((b.v - m.apply_direction(canonical_tangent_at_A(params))).norm() < 1e-14);
    }

    TEST_CASE("endpoints and interior points") {
        const Posed s = posed_scene(31, 2);
        const double c = s.scene.params.c;
        const std::vector<Vec2>& img0 = s.images[0].projected_samples;
        const PointReconstruction a = reconstruct_point(img0.front(), s.poses[0], s.poses[1], s.images[1], s.scene.params);
        CHECK(a.X.norm() < 1e-9 * c);

        const ReconstructedCurve rc = reconstruct_curve(s.images, s.poses, s.scene.params);
        REQUIRE(rc.points.size() == s.truth.samples.size());
        CHECK(rc.points.front() == s.truth.A());
        CHECK((rc.points.back() - s.truth.B()).norm() < 1e-12 * c);

        const std::size_t k = img0.size() / 2;
        const Vec3& X = rc.points[k];
        CHECK(std::min((X - s.truth.samples[k]).norm(), (mirror(X) - s.truth.samples[k]).norm()) < 1e-6 * c);
        CHECK((project_orthogonal(X) - img0[k]).norm() < 1e-8);

        // The frame-1 image of X is where the transported line met frame 1's curve.
        const RigidBasis b0 = frame_basis(s.poses[0], s.scene.params);
        const RigidBasis b1 = frame_basis(s.poses[1], s.scene.params);
        double after = 0.0;
        for (std::size_t i = 1; i < k; ++i)
            after = reconstruct_point(img0[i], s.poses[0], s.poses[1], s.images[1], s.scene.params, after).arc1;
        const PointReconstruction pr = reconstruct_point(img0[k], s.poses[0], s.poses[1], s.images[1], s.scene.params, after);
        CHECK((pr.X - X).norm() < 1e-12);
        CHECK((project_orthogonal(b1.from_basis(b0.to_basis(pr.X))) - pr.X1).norm() < 1e-8);
    }

    TEST_CASE("whole curves from two frames") {
        for (std::uint64_t seed = 40; seed < 50; ++seed) {
            const Posed s = posed_scene(seed, 2);
            const ReconstructedCurve rc = reconstruct_curve(s.images, s.poses, s.scene.params);
            CHECK(error_up_to_mirror(rc.points, s.truth.samples) <= 1e-5 * s.scene.params.c);
            CHECK(rc.mirror_flag == MirrorFlag::unresolved);
            CHECK(max_spacing_ratio(rc.points) <= 5.0);
            for (std::size_t k = 0; k < rc.source_image_indices.size(); ++k)
                CHECK(rc.source_image_indices[k] == static_cast<int>(k));
        }
    }

    TEST_CASE("a third frame checks the mirror hypothesis") {
        const Posed s = posed_scene(51, 3);
        const ReconstructedCurve rc = reconstruct_curve(s.images, s.poses, s.scene.params);
        CHECK(rc.mirror_flag == MirrorFlag::consistent);
        CHECK(error_up_to_mirror(rc.points, s.truth.samples) <= 1e-5 * s.scene.params.c);
    }

    TEST_CASE("solution wrapper matches poses to frames by index") {
        const Scene scene = make_scene(52, 3, true, 64);
        const std::vector<FrameImage> images = render_scene(scene);
        SolveReport sol;
        sol.params = scene.params;
        for (int k = 0; k < 3; ++k) sol.per_frame.push_back(recover_frame_pose(observe_frame(images[k], k), scene.params).pose);
        const ReconstructedCurve direct = reconstruct_from_solution(images, sol);
        sol.per_frame[0].frame_index = 7;
        CHECK_THROWS_AS(reconstruct_from_solution(images, sol), PreconditionError);
        CHECK(direct.points.size() == images[0].projected_samples.size());
    }

    TEST_CASE("coplanar tangents") {
        const Scene scene = make_scene(53, 2, false, 64, CurveParams{1.0, 0.7, 0.5, 0.0});
        std::vector<FrameImage> images;
        for (const FrameImage& img : render_scene(scene)) images.push_back(normalize_frame(img));
        const std::vector<FramePose> poses = {{0.4, 0.5, Branch::plus, DepthSign::front, 0},
                                              {1.2, 0.3, Branch::plus, DepthSign::front, 1}};
        CHECK_THROWS_AS(reconstruct_curve(images, poses, scene.params), CoplanarError);
    }

    TEST_CASE("identical poses give no parallax") {
        Posed s = posed_scene(54, 2);
        s.images[1] = s.images[0];
        s.poses[1] = s.poses[0];
        bool raised = false;
        try {
            reconstruct_curve(s.images, s.poses, s.scene.params);
        } catch (const NoIntersectionError&) {
            raised = true;
        } catch (const AmbiguityError&) {
            raised = true;
        }
        CHECK(raised);
    }

    TEST_CASE("preconditions") {
        const Posed s = posed_scene(55, 2);
        CHECK_THROWS_AS(reconstruct_curve({s.images[0]}, {s.poses[0]}, s.scene.params), PreconditionError);
        CHECK_THROWS_AS(reconstruct_curve(s.images, {s.poses[0]}, s.scene.params), PreconditionError);
        CHECK(mirror_flag_from_string(to_string(MirrorFlag::consistent)) == MirrorFlag::consistent);
        CHECK_THROWS_AS(mirror_flag_from_string("maybe"), FormatError);
    }
}
