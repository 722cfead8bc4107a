#pragma once

// Shared sampling loop for the screen-space passes. The bitmask passes and
// the horizon baselines walk exactly the same slices and steps, so method
// comparisons at equal seeds differ only in how samples are integrated.

#include "vbgi/bitmask.hpp"
#include "vbgi/passes.hpp"

#include <cmath>
#include <optional>
#include <type_traits>

namespace vbgi::detail {

struct ShadedPoint {
    int x = 0;
    int y = 0;
    Vec3 p;
    Vec3 n;
};

inline std::optional<ShadedPoint> shaded_point(const GBuffer& g, int x, int y) {
    const auto p = reconstruct_view_position({double(x), double(y)}, g.depth(x, y)(0), g.camera);
    if (!p) return std::nullopt;
    const Vec3 n = g.normal(x, y).cast<double>().matrix();
    if (!(n.norm() > 0.0)) return std::nullopt;
    return ShadedPoint{x, y, *p, n.normalized()};
}

inline Vec3 view_to_world(const GBuffer& g, const Vec3& v) { return g.camera.view_to_world_rotation() * v; }

/// Moves a sample from its pixel center onto the slice plane by intersecting
/// the view ray through the exact step position with the sample pixel's
/// tangent plane. Snapped pixel centers lie off the slice, which lifts flat
/// surfaces above their own horizon at grazing angles. Falls back to the
/// pixel center when the tangent plane is nearly edge-on.
inline Vec3 onto_slice(const Vec3& pixel_point, const Vec3& pixel_normal, const Vec3& ray) {
    const double denom = ray.dot(pixel_normal);
    if (std::abs(denom) > 1e-3 * ray.norm()) {
        const double t = pixel_point.dot(pixel_normal) / denom;
        const double ratio = t * ray.z() / pixel_point.z();
        if (ratio > 0.5 && ratio < 2.0) return t * ray;
    }
    return pixel_point;
}

struct StepSample {
    int side = 1;
    int px = 0;
    int py = 0;
    Vec3 front;           // view-space sample position s_f
    double distance = 0;  // |s_f - p|
    double front_rel = 0; // theta_f relative to the projected normal
    double back_rel = 0;  // theta_b relative to the projected normal
};

/// Visitor interface: begin_slice(frame), sample(frame, StepSample),
/// end_slice(frame). Samples arrive side by side, nearest first.
template <typename Visitor>
void walk_slices(const GBuffer& g, const PassConfig& config, int frame_index, const ShadedPoint& sp,
                 Visitor& visitor) {
    const double thickness = config.effective_thickness(sp.p.norm());
    const StepPlan plan = plan_steps(config.radius, sp.p, g.camera, config.samples, config.step_mode,
                                     step_jitter(config.seed, sp.x, sp.y, frame_index));
    const double max_distance = 2.0 * config.radius;

    for (double phi : slice_directions(config.slices, sp.x, sp.y, frame_index, config.seed)) {
        const SliceFrame<double> frame = build_slice_frame(sp.p, sp.n, phi);
        visitor.begin_slice(frame);
        const Vec2 dir = frame.screen_direction();
        for (int side : {1, -1}) {
            for (double offset : plan.positions) {
                const PixelCoord at{sp.x + side * offset * dir.x(), sp.y + side * offset * dir.y()};
                const int px = int(std::floor(at.x + 0.5));
                const int py = int(std::floor(at.y + 0.5));
                if ((px == sp.x && py == sp.y) || !g.depth.contains(px, py)) continue;
                const auto s_pixel = reconstruct_view_position({double(px), double(py)}, g.depth(px, py)(0), g.camera);
                if (!s_pixel) continue;
                const Vec3 s_front = onto_slice(*s_pixel, g.normal(px, py).template cast<double>().matrix(), view_ray(at, g.camera));
                const Vec3 w = s_front - sp.p;
                const double distance = w.norm();
                if (distance > max_distance) continue;
                // Pixel rounding can push very short steps across the slice.
                if (side * w.dot(frame.tangent) <= 0.0) continue;
                const auto angles = sample_angles(frame, sp.p, s_front, thickness);
                if (!angles) continue;
                visitor.sample(frame, StepSample{side, px, py, s_front, distance, angles->front - frame.n_angle,
                                                 angles->back - frame.n_angle});
            }
        }
        visitor.end_slice(frame);
    }
}

/// Calls fn(std::integral_constant<std::size_t, Words>) with the smallest
/// word count that holds `sectors`.
template <typename Fn>
decltype(auto) dispatch_words(int sectors, Fn&& fn) {
    switch (words_for_sectors(sectors)) {
        case 1: return fn(std::integral_constant<std::size_t, 1>{});
        case 2: return fn(std::integral_constant<std::size_t, 2>{});
        case 4: return fn(std::integral_constant<std::size_t, 4>{});
        case 8: return fn(std::integral_constant<std::size_t, 8>{});
        case 16: return fn(std::integral_constant<std::size_t, 16>{});
        case 32: return fn(std::integral_constant<std::size_t, 32>{});
        case 64: return fn(std::integral_constant<std::size_t, 64>{});
        default: throw ConfigError("unsupported sector count " + std::to_string(sectors));
    }
}

struct BitmaskOptions {
    bool gi = false;
    const AmbientEnvironment* env = nullptr;  // ambient when set
    bool bent = false;
};

/// Integrates one pixel with visibility bitmasks.
template <std::size_t Words>
class BitmaskIntegrator {
public:
    BitmaskIntegrator(const GBuffer& g, const PassConfig& config, const ShadedPoint& sp, const BitmaskOptions& opts)
        : g_(g), config_(config), sp_(sp), opts_(opts), acc_(config.sectors) {}

    void begin_slice(const SliceFrame<double>&) { acc_ = SectorMask<Words>(config_.sectors); }

    void sample(const SliceFrame<double>&, const StepSample& s) {
        const auto [lo, hi] = std::minmax(s.front_rel, s.back_rel);
        const SectorMask<Words> occluder = sectors_from_arc<Words>(lo, hi, config_.sectors);
        if (opts_.gi) {
            const int fresh = newly_unoccluded_count(occluder, acc_);
            if (fresh > 0) {
                const Vec3 l = (s.front - sp_.p) / s.distance;
                const Vec3 n_sample = g_.normal(s.px, s.py).template cast<double>().matrix();
                const double weight = double(fresh) / config_.sectors * std::max(sp_.n.dot(l), 0.0) *
                                      std::max(-n_sample.dot(l), 0.0);
                gi_ += weight * g_.light(s.px, s.py).template cast<double>();
            }
        }
        acc_ = merge(acc_, occluder);
    }

    void end_slice(const SliceFrame<double>& frame) {
        ao_ += visibility(acc_);
        ++slices_;
        if (opts_.env)
            ambient_ += slice_ambient(acc_, config_.ambient_subregions, frame, g_.camera.view_to_world_rotation(),
                                      *opts_.env);
        if (opts_.bent) bent_ += slice_open_direction_sum(acc_, frame);
    }

    double ao() const { return slices_ ? ao_ / slices_ : 1.0; }
    Rgb gi() const { return slices_ ? Rgb(gi_ / slices_) : Rgb(Rgb::Zero()); }
    Rgb ambient() const { return slices_ ? Rgb(ambient_ / slices_) : Rgb(Rgb::Zero()); }
    const Vec3& bent_sum() const { return bent_; }

private:
    const GBuffer& g_;
    const PassConfig& config_;
    const ShadedPoint& sp_;
    BitmaskOptions opts_;
    SectorMask<Words> acc_;
    double ao_ = 0.0;
    Rgb gi_ = Rgb::Zero();
    Rgb ambient_ = Rgb::Zero();
    Vec3 bent_ = Vec3::Zero();
    int slices_ = 0;
};

}  // namespace vbgi::detail
