#pragma once

#include "vbgi/bitmask.hpp"
#include "vbgi/environment.hpp"
#include "vbgi/gbuffer.hpp"
#include "vbgi/scene.hpp"
#include "vbgi/slice.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vbgi {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters shared by the bitmask passes and the baselines.
struct PassConfig {
    double radius = 2.0;           // world units
    int samples = 16;              // steps per horizon side
    int slices = 1;                // hemisphere slices per pixel per frame
    int sectors = 32;              // visibility sectors per slice
    double thickness = 0.2;        // world units
    double thickness_linear = 0.0; // t_eff = t * (1 + k * |p|)
    StepMode step_mode = StepMode::Constant;
    std::uint64_t seed = 0;
    int frames = 1;
    int ambient_subregions = 4;
    int threads = 0;               // 0: hardware concurrency; never affects results

    /// Throws ConfigError.
    void validate() const;
    double effective_thickness(double distance_to_camera) const {
        return thickness * (1.0 + thickness_linear * distance_to_camera);
    }
};

struct AoGi {
    ImageF1 ao;
    ImageF3 gi;
};

/// Bitmask AO and one-bounce indirect diffuse for one frame.
AoGi render_ao_gi(const GBuffer& gbuffer, const PassConfig& config, int frame_index = 0);

/// Directionally occluded ambient lighting for one frame. Each slice's final
/// bitmask is split into `ambient_subregions` contiguous groups; group m
/// samples `env` at its central direction, weighted by its unoccluded
/// fraction and by the cosine to the projected normal. The result is scaled
/// by pi/2 so an unoccluded slice under a constant environment converges to
/// the environment radiance.
ImageF3 render_ambient(const GBuffer& gbuffer, const PassConfig& config, const AmbientEnvironment& env,
                       int frame_index = 0);

/// Ambient gathered by one slice from its final bitmask. The sectors are
/// split into `subregions` contiguous groups; each open group samples `env`
/// at its central direction, weighted by its open fraction of all sectors
/// and the cosine to the projected normal, then scaled by pi/2.
template <std::size_t Words>
Rgb slice_ambient(const SectorMask<Words>& mask, int subregions, const SliceFrame<double>& frame,
                  const Eigen::Matrix3d& view_to_world, const AmbientEnvironment& env) {
    const int n_b = mask.sectors();
    const int per_group = n_b / subregions;
    Rgb sum = Rgb::Zero();
    for (int m = 0; m < subregions; ++m) {
        const auto group = SectorMask<Words>::range(n_b, m * per_group, (m + 1) * per_group);
        const int open = per_group - (mask & group).count();
        if (open == 0) continue;
        const double center = -std::numbers::pi / 2 + (m + 0.5) * std::numbers::pi / subregions;
        const Vec3 dir = frame.direction_at(frame.n_angle + center);
        sum += std::numbers::pi / 2 * double(open) / n_b * std::cos(center) * env.eval(view_to_world * dir);
    }
    return sum;
}

/// Sum of the view-space center directions of the open sectors of one slice.
template <std::size_t Words>
Vec3 slice_open_direction_sum(const SectorMask<Words>& mask, const SliceFrame<double>& frame) {
    Vec3 sum = Vec3::Zero();
    for (int k = 0; k < mask.sectors(); ++k)
        if (!mask.test(k)) sum += frame.direction_at(frame.n_angle + sector_center_angle(k, mask.sectors()));
    return sum;
}

/// Thrown when multi-bounce feedback runs away.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Feeds albedo * GI back into the light buffer `bounces - 1` times and
/// returns the final GI. Aborts when mean GI grows more than 10x between
/// iterations.
ImageF3 render_multibounce(const GBuffer& gbuffer, const PassConfig& config, int bounces);
ImageF3 render_multibounce(const AnalyticScene& scene, const CameraModel& camera, const PassConfig& config,
                           int bounces);

/// Mean of `frames` renders with frame_index = 0 .. frames-1.
OutputFrame accumulate(const GBuffer& gbuffer, const PassConfig& config, int frames, const AmbientEnvironment& env);

}  // namespace vbgi
