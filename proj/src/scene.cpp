#include "vbgi/scene.hpp"

#include "vbgi/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace vbgi {
namespace {

struct ShapeHit {
    double t;
    Vec3 normal;
};

std::optional<ShapeHit> intersect(const Plane& plane, const Vec3& o, const Vec3& d, double t_max) {
    const double denom = plane.normal.dot(d);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    const double t = (plane.offset - plane.normal.dot(o)) / denom;
    if (!(t > kRayEpsilon && t < t_max)) return std::nullopt;
    return ShapeHit{t, denom < 0.0 ? plane.normal : Vec3(-plane.normal)};
}

std::optional<ShapeHit> intersect(const Sphere& sphere, const Vec3& o, const Vec3& d, double t_max) {
    const Vec3 oc = o - sphere.center;
    const double b = oc.dot(d);
    const double c = oc.squaredNorm() - sphere.radius * sphere.radius;
    const double disc = b * b - c;
    if (disc < 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    for (double t : {-b - s, -b + s}) {
        if (t > kRayEpsilon && t < t_max) {
            Vec3 n = (o + t * d - sphere.center) / sphere.radius;
            if (n.dot(d) > 0.0) n = -n;
            return ShapeHit{t, n.normalized()};
        }
    }
    return std::nullopt;
}

std::optional<ShapeHit> intersect(const Box& box, const Vec3& o, const Vec3& d, double t_max) {
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();
    int near_axis = -1;
    int far_axis = -1;
    for (int a = 0; a < 3; ++a) {
        if (std::abs(d[a]) < 1e-15) {
            if (o[a] < box.lo[a] || o[a] > box.hi[a]) return std::nullopt;
            continue;
        }
        double t0 = (box.lo[a] - o[a]) / d[a];
        double t1 = (box.hi[a] - o[a]) / d[a];
        if (t0 > t1) std::swap(t0, t1);
        if (t0 > t_near) {
            t_near = t0;
            near_axis = a;
        }
        if (t1 < t_far) {
            t_far = t1;
            far_axis = a;
        }
    }
    if (t_near > t_far) return std::nullopt;
    auto face_normal = [&](int axis) {
        Vec3 n = Vec3::Zero();
        n[axis] = d[axis] > 0.0 ? -1.0 : 1.0;
        return n;
    };
    if (near_axis >= 0 && t_near > kRayEpsilon && t_near < t_max) return ShapeHit{t_near, face_normal(near_axis)};
    if (far_axis >= 0 && t_far > kRayEpsilon && t_far < t_max) return ShapeHit{t_far, face_normal(far_axis)};
    return std::nullopt;
}

Primitive plane(const Vec3& normal, double offset, double albedo) {
    return {Plane{normal.normalized(), offset}, Rgb::Constant(albedo)};
}
Primitive box(const Vec3& lo, const Vec3& hi, const Rgb& albedo) { return {Box{lo, hi}, albedo}; }
Primitive box(const Vec3& lo, const Vec3& hi, double albedo) { return box(lo, hi, Rgb::Constant(albedo)); }

PixelRect patch_around(double cx, double cy) {
    return PixelRect{int(std::lround(cx)) - 4, int(std::lround(cy)) - 4, 8, 8};
}

Vec3 world_to_view(const CameraModel& camera, const Vec3& w) { return camera.world_to_view * w; }

BuiltinScene make_flat(const BuiltinOptions& o) {
    BuiltinScene s;
    s.scene.primitives = {plane(Vec3::UnitY(), 0.0, 0.8)};
    s.scene.sun = {Vec3::UnitY(), Rgb::Constant(3.0)};
    s.camera = CameraModel::look_at({0, 2, 2}, {0, 0, 0}, Vec3::UnitY(), o.width, o.height, std::numbers::pi / 3);
    s.labels = {{"ground", 0}};
    return s;
}

BuiltinScene make_poles(const BuiltinOptions& o) {
    BuiltinScene s;
    s.scene.primitives = {plane(Vec3::UnitY(), 0.0, 0.7)};
    for (int i = 0; i < 5; ++i) {
        const double x = -1.0 + 0.5 * i;
        s.scene.primitives.push_back(box({x - 0.05, 0.0, -0.05}, {x + 0.05, 2.0, 0.05}, 0.8));
    }
    s.scene.sun = {Vec3(0.4, 1.0, 0.3).normalized(), Rgb::Constant(3.0)};
    s.camera = CameraModel::look_at({0, 1.5, 3.5}, {0, 0.6, 0}, Vec3::UnitY(), o.width, o.height, std::numbers::pi / 3);
    s.labels = {{"ground", 0}};
    return s;
}

// Thin panel raised off the ground, one unit in front of a thick back wall.
// The panel is thin along the view direction and short, so its true
// cross-section in any slice is small.
BuiltinScene make_thin_wall(const BuiltinOptions& o) {
    const double th = o.wall_thickness;
    if (!(th > 0.0)) throw std::invalid_argument("thin_wall: wall thickness must be > 0");
    BuiltinScene s;
    s.scene.primitives = {
        plane(Vec3::UnitY(), 0.0, 0.7),
        box({-4.0, 0.0, -3.4}, {4.0, 5.0, -3.0}, 0.8),
        box({-1.2, 1.5, -2.0}, {1.2, 2.0, -2.0 + th}, 0.8),
    };
    s.scene.sun = {Vec3(0.3, 1.0, 0.5).normalized(), Rgb::Constant(3.0)};
    s.camera = CameraModel::look_at({0, 2.3, 2.5}, {0, 2.0, -3.0}, Vec3::UnitY(), o.width, o.height, std::numbers::pi / 3);
    // Patch on the back wall directly above the panel's silhouette.
    const PixelCoord edge = project(world_to_view(s.camera, {0.0, 2.0, -2.0 + th}), s.camera);
    s.patch = patch_around(edge.x, std::floor(edge.y) - 7.0);
    s.labels = {{"ground", 0}, {"back_wall", 1}, {"thin_wall", 2}};
    return s;
}

BuiltinScene make_fence(const BuiltinOptions& o) {
    BuiltinScene s;
    s.scene.primitives = {
        plane(Vec3::UnitY(), 0.0, 0.7),
        box({-4.0, 0.0, -3.4}, {4.0, 4.0, -3.0}, 0.8),
    };
    for (int i = -4; i <= 4; ++i) {
        const double x = 0.4 * i;
        s.scene.primitives.push_back(box({x - 0.04, 0.0, -2.04}, {x + 0.04, 1.5, -1.96}, 0.8));
    }
    s.scene.sun = {Vec3(0.3, 1.0, 0.5).normalized(), Rgb::Constant(3.0)};
    s.camera = CameraModel::look_at({0, 1.0, 2.5}, {0, 0.9, -3.0}, Vec3::UnitY(), o.width, o.height, std::numbers::pi / 3);
    // Back wall seen between the two central bars.
    const PixelCoord c = project(world_to_view(s.camera, {0.2, 0.8, -3.0}), s.camera);
    s.patch = patch_around(c.x, c.y);
    s.labels = {{"ground", 0}, {"back_wall", 1}};
    return s;
}

// Room corner: the sun lights the back wall and floor; the left wall faces
// away from the sun and only receives bounced light.
BuiltinScene make_corner(const BuiltinOptions& o) {
    BuiltinScene s;
    s.scene.primitives = {
        plane(Vec3::UnitY(), 0.0, 0.7),
        box({-2.0, 0.0, -3.2}, {3.0, 3.0, -3.0}, Rgb(0.8, 0.45, 0.35)),
        box({-2.2, 0.0, -3.2}, {-2.0, 3.0, 2.0}, 0.8),
    };
    s.scene.sun = {Vec3(-0.5, 0.6, 0.6).normalized(), Rgb::Constant(4.0)};
    s.camera = CameraModel::look_at({1.5, 1.5, 2.5}, {-1.0, 0.8, -2.5}, Vec3::UnitY(), o.width, o.height, std::numbers::pi / 3);
    s.labels = {{"ground", 0}, {"back_wall", 1}, {"left_wall", 2}};
    return s;
}

BuiltinScene make_sphere_on_plane(const BuiltinOptions& o) {
    BuiltinScene s;
    s.scene.primitives = {plane(Vec3::UnitY(), 0.0, 0.7), {Sphere{{0, 1, 0}, 1.0}, Rgb::Constant(0.8)}};
    s.scene.sun = {Vec3(0.3, 1.0, 0.2).normalized(), Rgb::Constant(3.0)};
    s.camera = CameraModel::look_at({0, 2.5, 4.5}, {0, 0.5, 0}, Vec3::UnitY(), o.width, o.height, std::numbers::pi / 3);
    s.labels = {{"ground", 0}, {"sphere", 1}};
    return s;
}

}  // namespace

std::optional<Hit> trace_ray(const AnalyticScene& scene, const Vec3& origin, const Vec3& direction, double t_max) {
    std::optional<Hit> best;
    double limit = t_max;
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        const Primitive& prim = scene.primitives[i];
        const auto h = std::visit([&](const auto& shape) { return intersect(shape, origin, direction, limit); }, prim.shape);
        if (h && h->t < limit) {
            limit = h->t;
            best = Hit{h->t, h->normal, prim.albedo, int(i)};
        }
    }
    return best;
}

Ray primary_ray(const CameraModel& camera, int x, int y) {
    const Vec3 dir_view = view_ray({double(x), double(y)}, camera).normalized();
    return {camera.eye_world(), camera.view_to_world_rotation() * dir_view};
}

GBuffer synthesize_gbuffer(const AnalyticScene& scene, const CameraModel& camera, int threads) {
    camera.validate();
    GBuffer g;
    g.camera = camera;
    g.depth = ImageF1(camera.width, camera.height, ImageF1::Pixel::Constant(kSkyDepth));
    g.normal = ImageF3(camera.width, camera.height);
    g.light = ImageF3(camera.width, camera.height);
    g.albedo = ImageF3(camera.width, camera.height);

    const Eigen::Matrix3d to_view = camera.world_to_view.linear();
    const Vec3 sun_dir = scene.sun.direction.normalized();
    parallel_rows(camera.height, threads, [&](int y) {
        for (int x = 0; x < camera.width; ++x) {
            const Ray ray = primary_ray(camera, x, y);
            const auto hit = trace_ray(scene, ray.origin, ray.direction, std::numeric_limits<double>::infinity());
            if (!hit) continue;
            const Vec3 p_world = ray.origin + hit->distance * ray.direction;
            const double depth = -(camera.world_to_view * p_world).z();
            if (depth > camera.far_plane || depth < camera.near_plane) continue;

            const double cos_sun = hit->normal.dot(sun_dir);
            double shadow = 0.0;
            if (cos_sun > 0.0) {
                const Vec3 origin = p_world + 1e-3 * hit->normal;
                shadow = trace_ray(scene, origin, sun_dir, std::numeric_limits<double>::infinity()) ? 0.0 : 1.0;
            }
            g.depth(x, y)(0) = float(depth);
            g.normal(x, y) = (to_view * hit->normal).normalized().cast<float>().array();
            g.albedo(x, y) = hit->albedo.cast<float>();
            g.light(x, y) = (hit->albedo * scene.sun.radiance * std::max(cos_sun, 0.0) * shadow).cast<float>();
        }
    });
    return g;
}

std::vector<int> primitive_ids(const AnalyticScene& scene, const CameraModel& camera) {
    std::vector<int> ids(std::size_t(camera.width) * camera.height, -1);
    for (int y = 0; y < camera.height; ++y) {
        for (int x = 0; x < camera.width; ++x) {
            const Ray ray = primary_ray(camera, x, y);
            const auto hit = trace_ray(scene, ray.origin, ray.direction, std::numeric_limits<double>::infinity());
            if (!hit) continue;
            const double depth = -(camera.world_to_view * (ray.origin + hit->distance * ray.direction)).z();
            if (depth > camera.far_plane || depth < camera.near_plane) continue;
            ids[std::size_t(y) * camera.width + x] = hit->primitive;
        }
    }
    return ids;
}

int BuiltinScene::label(const std::string& key) const {
    for (const auto& [k, v] : labels)
        if (k == key) return v;
    throw std::invalid_argument("scene '" + name + "' has no label '" + key + "'");
}

const std::vector<std::string>& builtin_scene_names() {
    static const std::vector<std::string> names = {"flat", "poles", "fence", "corner", "sphere_on_plane", "thin_wall"};
    return names;
}

BuiltinScene builtin_scene(const std::string& name, const BuiltinOptions& options) {
    BuiltinScene s;
    if (name == "flat") s = make_flat(options);
    else if (name == "poles") s = make_poles(options);
    else if (name == "fence") s = make_fence(options);
    else if (name == "corner") s = make_corner(options);
    else if (name == "sphere_on_plane") s = make_sphere_on_plane(options);
    else if (name == "thin_wall") s = make_thin_wall(options);
    else throw std::invalid_argument("unknown scene '" + name + "'");
    s.name = name;
    return s;
}

}  // namespace vbgi
