#include "vbgi/environment.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace vbgi {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

Eigen::Vector3d parse_triplet(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 3) throw std::invalid_argument("expected three comma-separated numbers, got '" + s + "'");
    Eigen::Vector3d v;
    for (int i = 0; i < 3; ++i) {
        std::size_t used = 0;
        try {
            v[i] = std::stod(parts[i], &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != parts[i].size()) throw std::invalid_argument("malformed number '" + parts[i] + "'");
    }
    return v;
}

Rgb parse_rgb(const std::string& s) {
    const Rgb c = parse_triplet(s).array();
    if ((c < 0.0).any() || !c.allFinite()) throw std::invalid_argument("environment radiance must be finite and >= 0");
    return c;
}

}  // namespace

AmbientEnvironment AmbientEnvironment::constant(const Rgb& rgb) {
    AmbientEnvironment env;
    env.kind = Kind::Constant;
    env.top = env.horizon = rgb;
    return env;
}

AmbientEnvironment AmbientEnvironment::gradient(const Rgb& top, const Rgb& horizon, const Eigen::Vector3d& axis) {
    AmbientEnvironment env;
    env.kind = Kind::Gradient;
    env.top = top;
    env.horizon = horizon;
    env.axis = axis.normalized();
    return env;
}

Rgb AmbientEnvironment::eval(const Eigen::Vector3d& world_dir) const {
    if (kind == Kind::Constant) return top;
    const double s = std::clamp(world_dir.normalized().dot(axis), 0.0, 1.0);
    return horizon + s * (top - horizon);
}

AmbientEnvironment AmbientEnvironment::parse(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() == 2 && parts[0] == "constant") return constant(parse_rgb(parts[1]));
    if ((parts.size() == 3 || parts.size() == 4) && parts[0] == "gradient") {
        Eigen::Vector3d axis = Eigen::Vector3d::UnitY();
        if (parts.size() == 4) {
            axis = parse_triplet(parts[3]);
            if (!(axis.norm() > 0.0)) throw std::invalid_argument("gradient axis must be non-zero");
        }
        return gradient(parse_rgb(parts[1]), parse_rgb(parts[2]), axis);
    }
    throw std::invalid_argument("environment must be 'constant:r,g,b' or 'gradient:r,g,b:r,g,b[:x,y,z]'");
}

std::string AmbientEnvironment::to_string() const {
    std::string out = kind == Kind::Constant ? "constant:" : "gradient:";
    auto append = [&](const Eigen::Array3d& c) {
        for (int i = 0; i < 3; ++i) {
            char buf[32];
            const auto res = std::to_chars(buf, buf + sizeof buf, c[i]);
            if (i > 0) out += ',';
            out.append(buf, res.ptr);
        }
    };
    append(top);
    if (kind == Kind::Gradient) {
        out += ':';
        append(horizon);
        out += ':';
        append(axis.array());
    }
    return out;
}

}  // namespace vbgi
