#pragma once

#include <Eigen/Geometry>

#include <cmath>
#include <limits>
#include <optional>

namespace vbgi {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Continuous pixel coordinate. Integer values are pixel centers; (0, 0) is
/// the center of the top-left pixel.
struct PixelCoord {
    double x = 0.0;
    double y = 0.0;
};

/// Pinhole camera. View space is right-handed with the camera looking down -Z
/// and +Y up; pixels are square.
struct CameraModel {
    int width = 256;
    int height = 256;
    double vertical_fov = M_PI / 2;
    double near_plane = 1e-3;
    double far_plane = 1e3;
    Eigen::Isometry3d world_to_view = Eigen::Isometry3d::Identity();

    double aspect() const { return double(width) / height; }
    double tan_half_fov_y() const { return std::tan(vertical_fov / 2); }
    double tan_half_fov_x() const { return tan_half_fov_y() * aspect(); }

    /// Pixels per world unit for a fronto-parallel length at `depth`.
    double pixels_per_unit(double depth) const { return height / (2.0 * tan_half_fov_y() * depth); }

    Vec3 eye_world() const { return world_to_view.inverse().translation(); }
    Eigen::Matrix3d view_to_world_rotation() const { return world_to_view.linear().transpose(); }

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;

    /// Camera at `eye` looking at `target`.
    static CameraModel look_at(const Vec3& eye, const Vec3& target, const Vec3& up, int width, int height,
                               double vertical_fov);
};

/// View-space direction (z = -1) through a continuous pixel coordinate.
Vec3 view_ray(const PixelCoord& pixel, const CameraModel& camera);

/// View-space point on the ray through `pixel` with linear depth `depth`.
/// Returns nullopt for sky (non-finite) or non-positive depth.
std::optional<Vec3> reconstruct_view_position(const PixelCoord& pixel, double depth, const CameraModel& camera);

/// Continuous pixel coordinate of a view-space point in front of the camera.
PixelCoord project(const Vec3& view_point, const CameraModel& camera);

inline bool is_sky(float depth) { return !std::isfinite(depth); }
inline constexpr float kSkyDepth = std::numeric_limits<float>::infinity();

}  // namespace vbgi
