#include "test_support.hpp"

#include "vbgi/scene.hpp"

#include <numbers>

namespace vbgi {
namespace {

AnalyticScene ground_only() {
    AnalyticScene s;
    s.primitives = {{Plane{Vec3::UnitY(), 0.0}, Rgb::Constant(0.5)}};
    return s;
}

TEST(TraceRay, StraightDownOntoPlane) {
    const auto hit = trace_ray(ground_only(), {0, 1, 0}, {0, -1, 0}, 10.0);
    ASSERT_TRUE(hit);
    EXPECT_DOUBLE_EQ(hit->distance, 1.0);
    EXPECT_TRUE(hit->normal.isApprox(Vec3::UnitY()));
    EXPECT_EQ(hit->primitive, 0);
}

TEST(TraceRay, ParallelRayMisses) { EXPECT_FALSE(trace_ray(ground_only(), {0, 1, 0}, {1, 0, 0}, 1e9)); }

TEST(TraceRay, PlaneIsTwoSided) {
    const auto hit = trace_ray(ground_only(), {0, -2, 0}, {0, 1, 0}, 10.0);
    ASSERT_TRUE(hit);
    EXPECT_TRUE(hit->normal.isApprox(-Vec3::UnitY()));
}

TEST(TraceRay, SphereAlongCenterLine) {
    AnalyticScene s;
    s.primitives = {{Sphere{Vec3::Zero(), 1.0}, Rgb::Ones()}};
    const auto hit = trace_ray(s, {0, 0, 3}, {0, 0, -1}, 10.0);
    ASSERT_TRUE(hit);
    EXPECT_DOUBLE_EQ(hit->distance, 2.0);
    EXPECT_TRUE(hit->normal.isApprox(Vec3::UnitZ()));
    EXPECT_FALSE(trace_ray(s, {0, 0, 3}, {0, 0, -1}, 1.5));  // t_max is exclusive of farther hits
}

TEST(TraceRay, BoxFaceNormalsAndNearestHit) {
    AnalyticScene s;
    s.primitives = {{Box{{-1, -1, -1}, {1, 1, 1}}, Rgb::Ones()}, {Box{{-1, -1, -6}, {1, 1, -4}}, Rgb::Ones()}};
    const auto hit = trace_ray(s, {0, 0, 5}, {0, 0, -1}, 100.0);
    ASSERT_TRUE(hit);
    EXPECT_DOUBLE_EQ(hit->distance, 4.0);
    EXPECT_EQ(hit->primitive, 0);
    EXPECT_TRUE(hit->normal.isApprox(Vec3::UnitZ()));
    const auto side = trace_ray(s, {5, 0.5, 0}, {-1, 0, 0}, 100.0);
    ASSERT_TRUE(side);
    EXPECT_TRUE(side->normal.isApprox(Vec3::UnitX()));
    // From inside, the exit face is hit, with its normal facing the origin.
    const auto inside = trace_ray(s, {0, 0, 0}, {0, 1, 0}, 100.0);
    ASSERT_TRUE(inside);
    EXPECT_DOUBLE_EQ(inside->distance, 1.0);
    EXPECT_TRUE(inside->normal.isApprox(-Vec3::UnitY()));
}

TEST(Synthesize, EmptySceneIsAllSky) {
    const CameraModel cam = CameraModel::look_at({0, 0, 5}, {0, 0, 0}, Vec3::UnitY(), 16, 12, 1.0);
    const GBuffer g = synthesize_gbuffer(AnalyticScene{}, cam);
    EXPECT_EQ(g.width(), 16);
    EXPECT_EQ(g.height(), 12);
    for (int y = 0; y < 12; ++y)
        for (int x = 0; x < 16; ++x) {
            EXPECT_TRUE(g.sky(x, y));
            EXPECT_TRUE((g.light(x, y) == 0.0f).all());
        }
    EXPECT_TRUE(g.valid());
}

TEST(Synthesize, FrontalPlaneLitAlongItsNormal) {
    AnalyticScene s;
    s.primitives = {{Plane{Vec3::UnitZ(), 0.0}, Rgb(0.2, 0.4, 0.6)}};
    s.sun = {Vec3::UnitZ(), Rgb(2, 3, 4)};
    const CameraModel cam = CameraModel::look_at({0, 0, 3}, {0, 0, 0}, Vec3::UnitY(), 24, 24, 1.0);
    const GBuffer g = synthesize_gbuffer(s, cam);
    const Eigen::Array3f expected = (Rgb(0.2, 0.4, 0.6) * Rgb(2, 3, 4)).cast<float>();
    for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 24; ++x) {
            EXPECT_FLOAT_EQ(g.depth(x, y)(0), 3.0f);
            EXPECT_TRUE(g.light(x, y).isApprox(expected));
            EXPECT_TRUE(g.normal(x, y).isApprox(Eigen::Array3f(0, 0, 1)));
        }
}

// Independent per-pixel evaluation of the light buffer with trace_ray.
Rgb expected_light(const AnalyticScene& s, const CameraModel& cam, int x, int y) {
    const Ray ray = primary_ray(cam, x, y);
    const auto hit = trace_ray(s, ray.origin, ray.direction, 1e9);
    if (!hit) return Rgb::Zero();
    const Vec3 p = ray.origin + hit->distance * ray.direction;
    const double cos_l = hit->normal.dot(s.sun.direction);
    if (cos_l <= 0.0) return Rgb::Zero();
    const bool shadowed = trace_ray(s, p + 1e-3 * hit->normal, s.sun.direction, 1e9).has_value();
    return shadowed ? Rgb(Rgb::Zero()) : Rgb(hit->albedo * s.sun.radiance * cos_l);
}

TEST(Synthesize, CornerShadowedWallMatchesRayOracle) {
    BuiltinOptions opts;
    opts.width = 96;
    opts.height = 96;
    const BuiltinScene corner = builtin_scene("corner", opts);
    const GBuffer g = synthesize_gbuffer(corner.scene, corner.camera);
    const auto ids = primitive_ids(corner.scene, corner.camera);
    const int left = corner.label("left_wall");

    int checked_wall = 0;
    const int picks[10][2] = {{5, 40}, {10, 20}, {12, 60}, {20, 45}, {48, 70}, {60, 30}, {70, 80}, {80, 50}, {40, 90}, {90, 10}};
    for (const auto& [x, y] : picks) {
        const Rgb want = expected_light(corner.scene, corner.camera, x, y);
        EXPECT_TRUE(g.light(x, y).cast<double>().isApprox(want, 1e-6) || (want.abs() < 1e-9).all())
            << "pixel " << x << "," << y;
        if (ids[std::size_t(y) * 96 + x] == left) {
            ++checked_wall;
            EXPECT_TRUE((g.light(x, y) == 0.0f).all());
        }
    }
    EXPECT_GE(checked_wall, 2);

    // Every visible left-wall pixel is unlit.
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == left) {
            EXPECT_TRUE((g.light.data().col(Eigen::Index(i)) == 0.0f).all());
        }
}

TEST(Synthesize, ShadowTermIsBinary) {
    BuiltinOptions opts;
    opts.width = 48;
    opts.height = 48;
    const BuiltinScene poles = builtin_scene("poles", opts);
    const GBuffer g = synthesize_gbuffer(poles.scene, poles.camera);
    const Eigen::Matrix3d to_world = poles.camera.view_to_world_rotation();
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 48; ++x) {
            if (g.sky(x, y)) continue;
            const Vec3 n = to_world * g.normal(x, y).cast<double>().matrix();
            const Rgb unshadowed = g.albedo(x, y).cast<double>() * poles.scene.sun.radiance *
                                   std::max(0.0, n.dot(poles.scene.sun.direction));
            const Rgb got = g.light(x, y).cast<double>();
            const bool lit = got.isApprox(unshadowed, 1e-4);
            const bool dark = (got == 0.0).all();
            EXPECT_TRUE(lit || dark) << x << "," << y;
        }
}

TEST(Synthesize, IndependentOfThreadCount) {
    const BuiltinScene s = builtin_scene("fence", {64, 64, 0.2});
    const GBuffer a = synthesize_gbuffer(s.scene, s.camera, 1);
    const GBuffer b = synthesize_gbuffer(s.scene, s.camera, 7);
    EXPECT_TRUE(test::bit_identical(a.depth, b.depth));
    EXPECT_TRUE(test::bit_identical(a.normal, b.normal));
    EXPECT_TRUE(test::bit_identical(a.light, b.light));
}

TEST(Builtin, AllScenesProduceValidBuffers) {
    for (const auto& name : builtin_scene_names()) {
        const GBuffer& g = test::scene_gbuffer(name, 48);
        EXPECT_TRUE(g.valid()) << name;
        int surface = 0;
        for (int y = 0; y < 48; ++y)
            for (int x = 0; x < 48; ++x) surface += !g.sky(x, y);
        EXPECT_GT(surface, 48 * 48 / 2) << name;
    }
    EXPECT_EQ(builtin_scene_names().size(), 6u);
}

TEST(Builtin, UnknownNameThrows) { EXPECT_THROW(builtin_scene("bistro"), std::invalid_argument); }

TEST(Builtin, FlatCameraTwoUnitsAboveAt45Degrees) {
    const BuiltinScene s = builtin_scene("flat");
    EXPECT_EQ(s.scene.primitives.size(), 1u);
    EXPECT_DOUBLE_EQ(s.camera.eye_world().y(), 2.0);
    const Vec3 forward = s.camera.view_to_world_rotation() * Vec3(0, 0, -1);
    EXPECT_NEAR(std::asin(-forward.y()), std::numbers::pi / 4, 1e-12);
}

TEST(Builtin, PolesAreFiveThinBoxes) {
    const BuiltinScene s = builtin_scene("poles");
    int boxes = 0;
    for (const auto& p : s.scene.primitives)
        if (const auto* b = std::get_if<Box>(&p.shape)) {
            ++boxes;
            EXPECT_NEAR(b->hi.x() - b->lo.x(), 0.1, 1e-12);
            EXPECT_NEAR(b->hi.z() - b->lo.z(), 0.1, 1e-12);
        }
    EXPECT_EQ(boxes, 5);
}

TEST(Builtin, SphereRestsOnPlane) {
    const BuiltinScene s = builtin_scene("sphere_on_plane");
    const auto& sphere = std::get<Sphere>(s.scene.primitives.at(1).shape);
    const auto& plane = std::get<Plane>(s.scene.primitives.at(0).shape);
    EXPECT_DOUBLE_EQ(sphere.radius, 1.0);
    EXPECT_DOUBLE_EQ(plane.normal.dot(sphere.center) - plane.offset, sphere.radius);
}

TEST(Builtin, ThinWallThicknessIsAParameter) {
    for (double th : {0.05, 0.2, 0.6}) {
        const BuiltinScene s = builtin_scene("thin_wall", {64, 64, th});
        const auto& wall = std::get<Box>(s.scene.primitives.at(std::size_t(s.label("thin_wall"))).shape);
        EXPECT_NEAR(wall.hi.z() - wall.lo.z(), th, 1e-12);
    }
    EXPECT_THROW(builtin_scene("thin_wall", {64, 64, 0.0}), std::invalid_argument);
}

TEST(Builtin, PatchesSitOnTheBackWall) {
    for (const char* name : {"thin_wall", "fence"}) {
        const BuiltinScene s = builtin_scene(name);
        ASSERT_TRUE(s.patch) << name;
        const auto ids = primitive_ids(s.scene, s.camera);
        const int back = s.label("back_wall");
        for (int y = s.patch->y0; y < s.patch->y0 + 8; ++y)
            for (int x = s.patch->x0; x < s.patch->x0 + 8; ++x)
                EXPECT_EQ(ids[std::size_t(y) * s.camera.width + x], back) << name << " " << x << "," << y;
    }
}

}  // namespace
}  // namespace vbgi
