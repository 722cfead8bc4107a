#pragma once

#include "vbgi/camera.hpp"
#include "vbgi/hash.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace vbgi {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// 2-D frame of one hemisphere slice. Angles are measured in the slice plane
/// from `view_axis`, positive toward `tangent`.
template <typename Scalar>
struct SliceFrame {
    Scalar phi = 0;
    Vector3<Scalar> tangent = Vector3<Scalar>::UnitX();
    Vector3<Scalar> view_axis = Vector3<Scalar>::UnitZ();
    Vector3<Scalar> plane_normal = Vector3<Scalar>::UnitY();
    Scalar n_angle = 0;
    Scalar projected_normal_length = 1;
    /// Angle of the tangent with the view-space XY plane. Carried for
    /// completeness; nothing downstream reads it.
    Scalar t_theta = 0;

    Scalar angle_of(const Vector3<Scalar>& w) const {
        using std::atan2;
        return atan2(w.dot(tangent), w.dot(view_axis));
    }
    Vector3<Scalar> direction_at(Scalar theta) const {
        using std::cos;
        using std::sin;
        return cos(theta) * view_axis + sin(theta) * tangent;
    }
    /// Unit step in pixel coordinates (y grows downward) for this slice.
    Eigen::Matrix<Scalar, 2, 1> screen_direction() const {
        using std::cos;
        using std::sin;
        return {cos(phi), -sin(phi)};
    }
};

/// Slice azimuths pi * (i + xi) / N_d for a given offset xi in [0, 1).
inline std::vector<double> slice_angles(int slice_count, double xi) {
    std::vector<double> phis(std::size_t(std::max(slice_count, 0)));
    for (int i = 0; i < slice_count; ++i) phis[i] = std::numbers::pi * (i + xi) / slice_count;
    return phis;
}

inline double slice_offset(std::uint64_t seed, int x, int y, int frame_index) {
    return stable_hash01({seed, std::uint64_t(Stream::SliceOffset), std::uint64_t(x), std::uint64_t(y),
                          std::uint64_t(frame_index)});
}

inline std::vector<double> slice_directions(int slice_count, int x, int y, int frame_index, std::uint64_t seed) {
    return slice_angles(slice_count, slice_offset(seed, x, y, frame_index));
}

template <typename Scalar>
SliceFrame<Scalar> build_slice_frame(const Vector3<Scalar>& p, const Vector3<Scalar>& n, Scalar phi) {
    using std::atan2;
    using std::cos;
    using std::sin;
    constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;

    SliceFrame<Scalar> f;
    f.phi = phi;
    f.view_axis = (-p).normalized();
    const Vector3<Scalar> dir(cos(phi), sin(phi), Scalar(0));
    f.tangent = (dir - dir.dot(f.view_axis) * f.view_axis).normalized();
    f.plane_normal = f.view_axis.cross(f.tangent).normalized();
    f.t_theta = std::asin(std::clamp(f.tangent.z(), Scalar(-1), Scalar(1)));

    const Vector3<Scalar> projected = n - n.dot(f.plane_normal) * f.plane_normal;
    f.projected_normal_length = projected.norm();
    if (f.projected_normal_length < Scalar(1e-6)) {
        f.n_angle = 0;
    } else {
        f.n_angle = std::clamp(atan2(projected.dot(f.tangent), projected.dot(f.view_axis)), -half_pi, half_pi);
    }
    return f;
}

enum class StepMode { Constant, Exponential };

struct StepPlan {
    std::vector<double> positions;  // pixel offsets along one horizon side
    StepMode mode = StepMode::Constant;
    double jitter = 0.0;
};

inline double step_jitter(std::uint64_t seed, int x, int y, int frame_index) {
    return stable_hash01({seed, std::uint64_t(Stream::StepJitter), std::uint64_t(x), std::uint64_t(y),
                          std::uint64_t(frame_index)});
}

/// Step offsets for a screen radius of `radius_px` pixels. Constant mode
/// spaces N_s steps by radius/(N_s + 1); exponential mode warps
/// quadratically toward the pixel. Radii under one pixel collapse to a
/// single one-pixel step.
inline StepPlan plan_steps_px(double radius_px, int steps, StepMode mode, double jitter) {
    StepPlan plan;
    plan.mode = mode;
    plan.jitter = jitter;
    if (radius_px < 1.0) {
        plan.positions = {1.0};
        return plan;
    }
    plan.positions.resize(std::size_t(steps));
    for (int j = 0; j < steps; ++j) {
        const double s = j + jitter;
        plan.positions[j] = mode == StepMode::Constant ? s * radius_px / (steps + 1)
                                                       : radius_px * (s / steps) * (s / steps);
    }
    return plan;
}

/// Radius in pixels of a world-space radius seen at the depth of `p`.
inline double projected_radius(double radius_world, const Vec3& p, const CameraModel& camera) {
    return radius_world * camera.pixels_per_unit(-p.z());
}

inline StepPlan plan_steps(double radius_world, const Vec3& p, const CameraModel& camera, int steps, StepMode mode,
                           double jitter) {
    return plan_steps_px(projected_radius(radius_world, p, camera), steps, mode, jitter);
}

/// Front/back angles of one depth sample, measured from the view axis.
template <typename Scalar>
struct SampleAngles {
    Scalar front = 0;
    Scalar back = 0;
};

/// The sample is treated as a slab of depth `thickness` behind the visible
/// point s_f, along the shaded pixel's view ray. Returns nullopt when the
/// sample coincides with p.
template <typename Scalar>
std::optional<SampleAngles<Scalar>> sample_angles(const SliceFrame<Scalar>& frame, const Vector3<Scalar>& p,
                                                  const Vector3<Scalar>& s_front, Scalar thickness) {
    using std::atan2;
    const Vector3<Scalar> front = s_front - p;
    if (front.squaredNorm() == Scalar(0)) return std::nullopt;
    const Vector3<Scalar> back = front - frame.view_axis * thickness;
    const Scalar tangential = front.dot(frame.tangent);
    return SampleAngles<Scalar>{atan2(tangential, front.dot(frame.view_axis)),
                                atan2(tangential, back.dot(frame.view_axis))};
}

}  // namespace vbgi
