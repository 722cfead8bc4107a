#pragma once

#include <Eigen/Core>

#include <string>

namespace vbgi {

using Rgb = Eigen::Array3d;

/// Distant ambient light source, evaluated per world-space direction.
/// The gradient blends from `horizon` to `top` as the direction turns
/// toward `axis`; directions facing away from the axis get `horizon`.
struct AmbientEnvironment {
    enum class Kind { Constant, Gradient };

    Kind kind = Kind::Constant;
    Rgb top = Rgb::Ones();
    Rgb horizon = Rgb::Ones();
    Eigen::Vector3d axis = Eigen::Vector3d::UnitY();

    static AmbientEnvironment constant(const Rgb& rgb);
    static AmbientEnvironment gradient(const Rgb& top, const Rgb& horizon,
                                       const Eigen::Vector3d& axis = Eigen::Vector3d::UnitY());

    Rgb eval(const Eigen::Vector3d& world_dir) const;

    /// Parses "constant:r,g,b" or "gradient:r,g,b:r,g,b[:x,y,z]" (top, then
    /// horizon, then optional axis). Throws std::invalid_argument.
    static AmbientEnvironment parse(const std::string& text);
    std::string to_string() const;
};

}  // namespace vbgi
