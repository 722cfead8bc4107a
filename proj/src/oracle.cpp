#include "vbgi/oracle.hpp"

#include "vbgi/hash.hpp"
#include "vbgi/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace vbgi {

ImageF1 fine_slice_reference(const GBuffer& gbuffer, const PassConfig& config, int frame_index) {
    PassConfig fine = config;
    fine.sectors = kFineSectors;
    return render_ao_gi(gbuffer, fine, frame_index).ao;
}

double reference_visibility(const AnalyticScene& scene, const Vec3& point, const Vec3& normal, int rays,
                            double max_distance, std::uint64_t key) {
    const Vec3 n = normal.normalized();
    const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 t1 = n.cross(helper).normalized();
    const Vec3 t2 = n.cross(t1);
    const Vec3 origin = point + 1e-3 * n;

    const int side = std::max(1, int(std::sqrt(double(rays))));
    const int strata = side * side;
    int open = 0;
    for (int i = 0; i < rays; ++i) {
        const double j1 = stable_hash01({key, std::uint64_t(Stream::ReferenceRay), std::uint64_t(i), 0});
        const double j2 = stable_hash01({key, std::uint64_t(Stream::ReferenceRay), std::uint64_t(i), 1});
        double u1 = j1;
        double u2 = j2;
        if (i < strata) {
            u1 = ((i % side) + j1) / side;
            u2 = ((i / side) + j2) / side;
        }
        const double r = std::sqrt(u1);
        const double phi = 2.0 * std::numbers::pi * u2;
        const Vec3 dir =
            (r * std::cos(phi) * t1 + r * std::sin(phi) * t2 + std::sqrt(std::max(0.0, 1.0 - u1)) * n).normalized();
        if (!trace_ray(scene, origin, dir, max_distance)) ++open;
    }
    return double(open) / rays;
}

ImageF1 world_ao_reference(const AnalyticScene& scene, const CameraModel& camera, int rays_per_pixel,
                           double max_distance, std::uint64_t seed, int threads) {
    camera.validate();
    ImageF1 out(camera.width, camera.height, ImageF1::Pixel::Ones());
    parallel_rows(camera.height, threads, [&](int y) {
        for (int x = 0; x < camera.width; ++x) {
            const Ray ray = primary_ray(camera, x, y);
            const auto hit = trace_ray(scene, ray.origin, ray.direction, std::numeric_limits<double>::infinity());
            if (!hit) continue;
            const Vec3 p = ray.origin + hit->distance * ray.direction;
            const double depth = -(camera.world_to_view * p).z();
            if (depth > camera.far_plane || depth < camera.near_plane) continue;
            const std::uint64_t key = stable_hash({seed, std::uint64_t(x), std::uint64_t(y)});
            out(x, y)(0) = float(reference_visibility(scene, p, hit->normal, rays_per_pixel, max_distance, key));
        }
    });
    return out;
}

}  // namespace vbgi
