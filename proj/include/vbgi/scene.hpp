#pragma once

#include "vbgi/camera.hpp"
#include "vbgi/environment.hpp"
#include "vbgi/gbuffer.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vbgi {

/// Infinite plane { x : normal . x = offset }. Two-sided.
struct Plane {
    Vec3 normal = Vec3::UnitY();
    double offset = 0.0;
};

struct Sphere {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
};

/// Axis-aligned box.
struct Box {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Ones();
};

struct Primitive {
    std::variant<Plane, Sphere, Box> shape;
    Rgb albedo = Rgb::Constant(0.8);
};

/// Directional light. `direction` points from the surface toward the sun.
struct Sun {
    Vec3 direction = Vec3::UnitY();
    Rgb radiance = Rgb::Ones();
};

struct AnalyticScene {
    std::vector<Primitive> primitives;
    Sun sun;
    AmbientEnvironment ambient;
};

struct Hit {
    double distance = 0.0;
    Vec3 normal = Vec3::UnitY();  // world space, facing the ray origin
    Rgb albedo = Rgb::Zero();
    int primitive = -1;
};

inline constexpr double kRayEpsilon = 1e-4;

/// Nearest intersection with distance in (kRayEpsilon, t_max).
std::optional<Hit> trace_ray(const AnalyticScene& scene, const Vec3& origin, const Vec3& direction, double t_max);

/// World-space primary ray through a pixel center.
struct Ray {
    Vec3 origin;
    Vec3 direction;
};
Ray primary_ray(const CameraModel& camera, int x, int y);

/// Ray-casts one G-buffer: pixel-center primary rays, hard sun shadows.
GBuffer synthesize_gbuffer(const AnalyticScene& scene, const CameraModel& camera, int threads = 0);

/// Index of the primitive seen at each pixel (-1 for sky), row-major.
std::vector<int> primitive_ids(const AnalyticScene& scene, const CameraModel& camera);

struct PixelRect {
    int x0 = 0;
    int y0 = 0;
    int width = 8;
    int height = 8;
    bool contains(int x, int y) const { return x >= x0 && y >= y0 && x < x0 + width && y < y0 + height; }
};

/// A canned scene with its default camera. `patch` marks the 8x8 region of
/// interest for thin-occluder comparisons (thin_wall and fence only).
/// `focus` names primitives that tests sample (e.g. the shadowed wall).
struct BuiltinScene {
    std::string name;
    AnalyticScene scene;
    CameraModel camera;
    std::optional<PixelRect> patch;
    std::vector<std::pair<std::string, int>> labels;

    int label(const std::string& key) const;
};

struct BuiltinOptions {
    int width = 256;
    int height = 256;
    double wall_thickness = 0.2;
};

/// Names: flat, poles, fence, corner, sphere_on_plane, thin_wall.
/// Throws std::invalid_argument for unknown names.
BuiltinScene builtin_scene(const std::string& name, const BuiltinOptions& options = {});
const std::vector<std::string>& builtin_scene_names();

}  // namespace vbgi
