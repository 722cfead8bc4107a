#include "vbgi/baselines.hpp"

#include "slice_walk.hpp"
#include "vbgi/parallel.hpp"

#include <cmath>

namespace vbgi {
namespace {

class HorizonIntegrator {
public:
    HorizonIntegrator(const PassConfig& config, Falloff falloff) : config_(config), falloff_(falloff) {}

    void begin_slice(const SliceFrame<double>&) { horizons_ = HorizonPair{}; }

    void sample(const SliceFrame<double>&, const detail::StepSample& s) {
        constexpr double half_pi = std::numbers::pi / 2;
        double theta = std::clamp(s.front_rel, -half_pi, half_pi);
        if (falloff_ == Falloff::Linear) {
            const double w = std::max(0.0, 1.0 - s.distance / config_.radius);
            const double boundary = s.side > 0 ? half_pi : -half_pi;
            theta = boundary + w * (theta - boundary);
        }
        if (s.side > 0) horizons_.theta2 = std::min(horizons_.theta2, theta);
        else horizons_.theta1 = std::max(horizons_.theta1, theta);
    }

    void end_slice(const SliceFrame<double>&) {
        ao_ += horizons_.visibility();
        ++slices_;
    }

    double ao() const { return slices_ ? ao_ / slices_ : 1.0; }

private:
    const PassConfig& config_;
    Falloff falloff_;
    HorizonPair horizons_;
    double ao_ = 0.0;
    int slices_ = 0;
};

Vec3 any_orthogonal(const Vec3& n) {
    const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    return n.cross(helper).normalized();
}

struct BentResult {
    double ao = 1.0;
    Vec3 bent;
};

template <typename Fn>
void bent_normals(const GBuffer& g, const PassConfig& config, int frame_index, Fn&& store) {
    config.validate();
    detail::dispatch_words(config.sectors, [&](auto words) {
        constexpr std::size_t W = decltype(words)::value;
        parallel_rows(g.height(), config.threads, [&](int y) {
            for (int x = 0; x < g.width(); ++x) {
                const auto sp = detail::shaded_point(g, x, y);
                if (!sp) {
                    store(x, y, std::optional<BentResult>{});
                    continue;
                }
                detail::BitmaskOptions opts;
                opts.bent = true;
                detail::BitmaskIntegrator<W> integrator(g, config, *sp, opts);
                detail::walk_slices(g, config, frame_index, *sp, integrator);
                const Vec3& sum = integrator.bent_sum();
                const Vec3 bent = sum.norm() > 1e-9 ? Vec3(sum.normalized()) : sp->n;
                store(x, y, std::optional<BentResult>{BentResult{integrator.ao(), bent}});
            }
        });
    });
}

}  // namespace

ImageF1 render_gtao(const GBuffer& gbuffer, const PassConfig& config, Falloff falloff, int frame_index) {
    config.validate();
    ImageF1 out(gbuffer.width(), gbuffer.height(), ImageF1::Pixel::Ones());
    parallel_rows(gbuffer.height(), config.threads, [&](int y) {
        for (int x = 0; x < gbuffer.width(); ++x) {
            const auto sp = detail::shaded_point(gbuffer, x, y);
            if (!sp) continue;
            HorizonIntegrator integrator(config, falloff);
            detail::walk_slices(gbuffer, config, frame_index, *sp, integrator);
            out(x, y)(0) = float(integrator.ao());
        }
    });
    return out;
}

ImageF3 render_bent_normal_ambient(const GBuffer& gbuffer, const PassConfig& config, const AmbientEnvironment& env,
                                   int frame_index) {
    ImageF3 out(gbuffer.width(), gbuffer.height());
    bent_normals(gbuffer, config, frame_index, [&](int x, int y, const std::optional<BentResult>& r) {
        if (!r) {
            const Vec3 ray = view_ray({double(x), double(y)}, gbuffer.camera).normalized();
            out(x, y) = env.eval(detail::view_to_world(gbuffer, ray)).cast<float>();
            return;
        }
        out(x, y) = (env.eval(detail::view_to_world(gbuffer, r->bent)) * r->ao).cast<float>();
    });
    return out;
}

ImageF3 render_bent_normals(const GBuffer& gbuffer, const PassConfig& config, int frame_index) {
    ImageF3 out(gbuffer.width(), gbuffer.height());
    bent_normals(gbuffer, config, frame_index, [&](int x, int y, const std::optional<BentResult>& r) {
        if (r) out(x, y) = r->bent.cast<float>().array();
    });
    return out;
}

ImageF3 render_normal_ambient(const GBuffer& gbuffer, const AmbientEnvironment& env) {
    ImageF3 out(gbuffer.width(), gbuffer.height());
    for (int y = 0; y < gbuffer.height(); ++y) {
        for (int x = 0; x < gbuffer.width(); ++x) {
            const auto sp = detail::shaded_point(gbuffer, x, y);
            const Vec3 dir = sp ? sp->n : Vec3(view_ray({double(x), double(y)}, gbuffer.camera).normalized());
            out(x, y) = env.eval(detail::view_to_world(gbuffer, dir)).cast<float>();
        }
    }
    return out;
}

ImageF3 render_ssr_gi(const GBuffer& gbuffer, const PassConfig& config, int rays_per_pixel, int frame_index) {
    config.validate();
    if (rays_per_pixel < 1) throw ConfigError("rays per pixel must be >= 1");
    const CameraModel& camera = gbuffer.camera;
    ImageF3 out(gbuffer.width(), gbuffer.height());
    parallel_rows(gbuffer.height(), config.threads, [&](int y) {
        for (int x = 0; x < gbuffer.width(); ++x) {
            const auto sp = detail::shaded_point(gbuffer, x, y);
            if (!sp) continue;
            const double thickness = config.effective_thickness(sp->p.norm());
            const double jitter = step_jitter(config.seed, x, y, frame_index);
            const Vec3 t1 = any_orthogonal(sp->n);
            const Vec3 t2 = sp->n.cross(t1);
            Rgb sum = Rgb::Zero();
            for (int r = 0; r < rays_per_pixel; ++r) {
                const auto key = [&](std::uint64_t dim) {
                    return stable_hash01({config.seed, std::uint64_t(Stream::SsrRay), std::uint64_t(x), std::uint64_t(y),
                                          std::uint64_t(frame_index), std::uint64_t(r), dim});
                };
                const double u1 = key(0);
                const double u2 = key(1);
                const double radial = std::sqrt(u1);
                const double azimuth = 2.0 * std::numbers::pi * u2;
                const Vec3 dir = (radial * std::cos(azimuth) * t1 + radial * std::sin(azimuth) * t2 +
                                  std::sqrt(std::max(0.0, 1.0 - u1)) * sp->n)
                                     .normalized();
                for (int j = 0; j < config.samples; ++j) {
                    const Vec3 q = sp->p + dir * ((j + jitter) * config.radius / config.samples);
                    if (-q.z() <= camera.near_plane) break;
                    const PixelCoord pc = project(q, camera);
                    const int px = int(std::floor(pc.x + 0.5));
                    const int py = int(std::floor(pc.y + 0.5));
                    if (!gbuffer.depth.contains(px, py)) break;
                    if (px == x && py == y) continue;
                    const float scene_depth = gbuffer.depth(px, py)(0);
                    if (is_sky(scene_depth)) continue;
                    const double behind = -q.z() - scene_depth;
                    if (behind >= 0.0 && behind <= thickness) {
                        const Vec3 n_hit = gbuffer.normal(px, py).cast<double>().matrix();
                        sum += gbuffer.light(px, py).cast<double>() * std::max(-n_hit.dot(dir), 0.0);
                        break;
                    }
                }
            }
            out(x, y) = (sum / rays_per_pixel).cast<float>();
        }
    });
    return out;
}

}  // namespace vbgi
