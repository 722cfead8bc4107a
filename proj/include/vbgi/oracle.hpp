#pragma once

#include "vbgi/bitmask.hpp"
#include "vbgi/passes.hpp"
#include "vbgi/scene.hpp"

#include <cstdint>

namespace vbgi {

/// Per-sector loop in angle space: sector k is set iff its overlap with the
/// arc is at least half a sector. Linear in the sector count.
template <std::size_t Words = 1>
SectorMask<Words> sectors_bruteforce(double theta_min, double theta_max, int sectors) {
    constexpr double half_pi = std::numbers::pi / 2;
    SectorMask<Words> m(sectors);
    const double lo = std::clamp(std::min(theta_min, theta_max), -half_pi, half_pi);
    const double hi = std::clamp(std::max(theta_min, theta_max), -half_pi, half_pi);
    const double width = std::numbers::pi / sectors;
    for (int k = 0; k < sectors; ++k) {
        const double begin = -half_pi + k * width;
        const double overlap = std::min(hi, begin + width) - std::max(lo, begin);
        if (overlap >= 0.5 * width) m.set(k);
    }
    return m;
}

inline constexpr int kFineSectors = 4096;

/// Bitmask AO at 4096 sectors with the caller's seeds.
ImageF1 fine_slice_reference(const GBuffer& gbuffer, const PassConfig& config, int frame_index = 0);

/// Fraction of cosine-distributed rays from `point` that escape within
/// `max_distance`. Stratified; deterministic for a given key.
double reference_visibility(const AnalyticScene& scene, const Vec3& point, const Vec3& normal, int rays,
                            double max_distance, std::uint64_t key);

/// World-space ray-cast AO from each pixel's primary hit. Sky pixels are 1.
ImageF1 world_ao_reference(const AnalyticScene& scene, const CameraModel& camera, int rays_per_pixel,
                           double max_distance, std::uint64_t seed = 0, int threads = 0);

}  // namespace vbgi
