#include "vbgi/camera.hpp"

#include <stdexcept>

namespace vbgi {

void CameraModel::validate() const {
    if (width < 1 || height < 1) throw std::invalid_argument("camera: width and height must be >= 1");
    if (!(near_plane > 0.0) || !(near_plane < far_plane))
        throw std::invalid_argument("camera: require 0 < near < far");
    if (!(vertical_fov > 0.0) || !(vertical_fov < M_PI))
        throw std::invalid_argument("camera: vertical fov must lie in (0, pi)");
}

CameraModel CameraModel::look_at(const Vec3& eye, const Vec3& target, const Vec3& up, int width, int height,
                                 double vertical_fov) {
    const Vec3 forward = (target - eye).normalized();
    const Vec3 right = forward.cross(up).normalized();
    const Vec3 true_up = right.cross(forward);

    // Rows of the rotation are the camera axes expressed in world space.
    Eigen::Matrix3d rotation;
    rotation.row(0) = right.transpose();
    rotation.row(1) = true_up.transpose();
    rotation.row(2) = -forward.transpose();

    CameraModel camera;
    camera.width = width;
    camera.height = height;
    camera.vertical_fov = vertical_fov;
    camera.world_to_view.linear() = rotation;
    camera.world_to_view.translation() = -rotation * eye;
    camera.validate();
    return camera;
}

Vec3 view_ray(const PixelCoord& pixel, const CameraModel& camera) {
    const double ndc_x = (pixel.x + 0.5) / camera.width * 2.0 - 1.0;
    const double ndc_y = 1.0 - (pixel.y + 0.5) / camera.height * 2.0;
    return {ndc_x * camera.tan_half_fov_x(), ndc_y * camera.tan_half_fov_y(), -1.0};
}

std::optional<Vec3> reconstruct_view_position(const PixelCoord& pixel, double depth, const CameraModel& camera) {
    if (!std::isfinite(depth) || depth <= 0.0) return std::nullopt;
    return view_ray(pixel, camera) * depth;
}

PixelCoord project(const Vec3& view_point, const CameraModel& camera) {
    const double depth = -view_point.z();
    const double ndc_x = view_point.x() / depth / camera.tan_half_fov_x();
    const double ndc_y = view_point.y() / depth / camera.tan_half_fov_y();
    return {(ndc_x + 1.0) * 0.5 * camera.width - 0.5, (1.0 - ndc_y) * 0.5 * camera.height - 0.5};
}

}  // namespace vbgi
