#include "vbgi/passes.hpp"

#include "slice_walk.hpp"
#include "vbgi/parallel.hpp"

#include <cmath>

namespace vbgi {

void PassConfig::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("radius must be > 0");
    if (!(thickness > 0.0) || !std::isfinite(thickness)) throw ConfigError("thickness must be > 0");
    if (!(thickness_linear >= 0.0) || !std::isfinite(thickness_linear))
        throw ConfigError("thickness-linear must be >= 0");
    if (samples < 1) throw ConfigError("samples must be >= 1");
    if (slices < 1) throw ConfigError("slices must be >= 1");
    if (frames < 1) throw ConfigError("frames must be >= 1");
    if (!supported_sector_count(sectors))
        throw ConfigError("sectors must be a power of two in [8, 4096], got " + std::to_string(sectors));
    if (ambient_subregions < 1 || sectors % ambient_subregions != 0)
        throw ConfigError("ambient subregions must divide the sector count");
}

namespace {

struct PixelOutputs {
    double ao = 1.0;
    Rgb gi = Rgb::Zero();
    Rgb ambient = Rgb::Zero();
};

template <typename Store>
void for_each_pixel(const GBuffer& g, const PassConfig& config, int frame_index, const detail::BitmaskOptions& opts,
                    Store&& store) {
    config.validate();
    detail::dispatch_words(config.sectors, [&](auto words) {
        constexpr std::size_t W = decltype(words)::value;
        parallel_rows(g.height(), config.threads, [&](int y) {
            for (int x = 0; x < g.width(); ++x) {
                PixelOutputs out;
                const auto sp = detail::shaded_point(g, x, y);
                if (!sp) {
                    if (opts.env) {
                        const Vec3 ray = view_ray({double(x), double(y)}, g.camera).normalized();
                        out.ambient = opts.env->eval(detail::view_to_world(g, ray));
                    }
                    store(x, y, out);
                    continue;
                }
                detail::BitmaskIntegrator<W> integrator(g, config, *sp, opts);
                detail::walk_slices(g, config, frame_index, *sp, integrator);
                out.ao = integrator.ao();
                out.gi = integrator.gi();
                out.ambient = integrator.ambient();
                store(x, y, out);
            }
        });
    });
}

double mean_luminance(const ImageF3& img) { return img.data().cast<double>().mean(); }

}  // namespace

AoGi render_ao_gi(const GBuffer& gbuffer, const PassConfig& config, int frame_index) {
    AoGi out{ImageF1(gbuffer.width(), gbuffer.height()), ImageF3(gbuffer.width(), gbuffer.height())};
    detail::BitmaskOptions opts;
    opts.gi = true;
    for_each_pixel(gbuffer, config, frame_index, opts, [&](int x, int y, const PixelOutputs& px) {
        out.ao(x, y)(0) = float(px.ao);
        out.gi(x, y) = px.gi.cast<float>();
    });
    return out;
}

ImageF3 render_ambient(const GBuffer& gbuffer, const PassConfig& config, const AmbientEnvironment& env,
                       int frame_index) {
    ImageF3 out(gbuffer.width(), gbuffer.height());
    detail::BitmaskOptions opts;
    opts.env = &env;
    for_each_pixel(gbuffer, config, frame_index, opts,
                   [&](int x, int y, const PixelOutputs& px) { out(x, y) = px.ambient.cast<float>(); });
    return out;
}

ImageF3 render_multibounce(const GBuffer& gbuffer, const PassConfig& config, int bounces) {
    if (bounces < 1) throw ConfigError("bounces must be >= 1");
    GBuffer working = gbuffer;
    ImageF3 gi = render_ao_gi(working, config).gi;
    double previous = mean_luminance(gi);
    for (int b = 1; b < bounces; ++b) {
        working.light.data() = gbuffer.light.data() + gbuffer.albedo.data() * gi.data();
        gi = render_ao_gi(working, config).gi;
        const double current = mean_luminance(gi);
        if (previous > 0.0 && current > 10.0 * previous)
            throw DivergenceError("multi-bounce GI grew more than 10x in one iteration");
        previous = current;
    }
    return gi;
}

ImageF3 render_multibounce(const AnalyticScene& scene, const CameraModel& camera, const PassConfig& config,
                           int bounces) {
    return render_multibounce(synthesize_gbuffer(scene, camera, config.threads), config, bounces);
}

OutputFrame accumulate(const GBuffer& gbuffer, const PassConfig& config, int frames, const AmbientEnvironment& env) {
    if (frames < 1) throw ConfigError("frames must be >= 1");
    const int w = gbuffer.width();
    const int h = gbuffer.height();
    Eigen::ArrayXXd ao = Eigen::ArrayXXd::Zero(1, Eigen::Index(w) * h);
    Eigen::ArrayXXd gi = Eigen::ArrayXXd::Zero(3, Eigen::Index(w) * h);
    Eigen::ArrayXXd ambient = Eigen::ArrayXXd::Zero(3, Eigen::Index(w) * h);
    detail::BitmaskOptions opts;
    opts.gi = true;
    opts.env = &env;
    for (int f = 0; f < frames; ++f) {
        // Per-frame values are rounded to float first so that averaging
        // identical frames reproduces the single-frame image exactly.
        ImageF1 ao_f(w, h);
        ImageF3 gi_f(w, h);
        ImageF3 amb_f(w, h);
        for_each_pixel(gbuffer, config, f, opts, [&](int x, int y, const PixelOutputs& px) {
            ao_f(x, y)(0) = float(px.ao);
            gi_f(x, y) = px.gi.cast<float>();
            amb_f(x, y) = px.ambient.cast<float>();
        });
        ao += ao_f.data().cast<double>();
        gi += gi_f.data().cast<double>();
        ambient += amb_f.data().cast<double>();
    }
    OutputFrame out{ImageF1(w, h), ImageF3(w, h), ImageF3(w, h)};
    out.ao.data() = (ao / frames).cast<float>().min(1.0f).max(0.0f);
    out.gi.data() = (gi / frames).cast<float>();
    out.ambient.data() = (ambient / frames).cast<float>();
    return out;
}

}  // namespace vbgi
