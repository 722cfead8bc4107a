#include "vbgi/gbuffer.hpp"

#include <cmath>
#include <sstream>

namespace vbgi {

std::vector<std::string> GBuffer::violations() const {
    std::vector<std::string> out;
    constexpr std::size_t kMaxReports = 16;
    auto report = [&](int x, int y, const std::string& what) {
        if (out.size() >= kMaxReports) return;
        std::ostringstream os;
        os << "pixel (" << x << ", " << y << "): " << what;
        out.push_back(os.str());
    };

    try {
        camera.validate();
    } catch (const std::exception& e) {
        out.emplace_back(e.what());
    }
    if (!depth.same_shape(normal) || !depth.same_shape(light) || !depth.same_shape(albedo)) {
        out.emplace_back("image dimensions differ");
        return out;
    }
    if (depth.width() != camera.width || depth.height() != camera.height)
        out.emplace_back("image dimensions do not match camera");

    for (int y = 0; y < height(); ++y) {
        for (int x = 0; x < width(); ++x) {
            const float d = depth(x, y)(0);
            if (std::isnan(d) || d <= 0.0f) report(x, y, "depth must be > 0 or +inf");
            if (!light(x, y).allFinite() || (light(x, y) < 0.0f).any()) report(x, y, "light must be finite and >= 0");
            if ((albedo(x, y) < 0.0f).any() || (albedo(x, y) > 1.0f).any()) report(x, y, "albedo outside [0, 1]");
            if (!is_sky(d)) {
                const double len = normal(x, y).cast<double>().matrix().norm();
                if (std::abs(len - 1.0) > 1e-4) report(x, y, "normal is not unit length");
            }
        }
    }
    return out;
}

}  // namespace vbgi
