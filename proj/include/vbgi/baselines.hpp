#pragma once

#include "vbgi/passes.hpp"

namespace vbgi {

/// Highest occluder angles on the two sides of a slice, relative to the
/// projected normal. Starts fully open at (-pi/2, +pi/2).
struct HorizonPair {
    double theta1 = -std::numbers::pi / 2;  // negative side
    double theta2 = std::numbers::pi / 2;   // positive side

    double visibility() const { return std::max(theta2 - theta1, 0.0) / std::numbers::pi; }
};

enum class Falloff { None, Linear };

/// Two-horizon AO with the same slices, steps, and seeds as the bitmask
/// pass. Visibility is the open angular fraction between the horizons in
/// uniform angle space. Linear falloff scales each sample's elevation above
/// the hemisphere boundary by max(0, 1 - d/r).
ImageF1 render_gtao(const GBuffer& gbuffer, const PassConfig& config, Falloff falloff, int frame_index = 0);

/// Ambient sampled once along the bent normal (mean unoccluded sector
/// direction over all slices) and scaled by bitmask AO.
ImageF3 render_bent_normal_ambient(const GBuffer& gbuffer, const PassConfig& config, const AmbientEnvironment& env,
                                   int frame_index = 0);

/// Bent normals (view space) produced alongside render_bent_normal_ambient.
ImageF3 render_bent_normals(const GBuffer& gbuffer, const PassConfig& config, int frame_index = 0);

/// Ambient sampled along the G-buffer normal with no occlusion at all.
ImageF3 render_normal_ambient(const GBuffer& gbuffer, const AmbientEnvironment& env);

/// Screen-space ray marching GI: cosine-distributed rays, `samples` steps
/// each over the world radius; the first depth crossing within the
/// thickness contributes its light once.
ImageF3 render_ssr_gi(const GBuffer& gbuffer, const PassConfig& config, int rays_per_pixel, int frame_index = 0);

}  // namespace vbgi
