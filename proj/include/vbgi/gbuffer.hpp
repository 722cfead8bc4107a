#pragma once

#include "vbgi/camera.hpp"
#include "vbgi/image.hpp"

#include <string>
#include <vector>

namespace vbgi {

/// Single-layer G-buffer. Depth is view-space linear distance along -Z with
/// +infinity marking sky pixels; normals are unit view-space vectors.
struct GBuffer {
    ImageF1 depth;
    ImageF3 normal;
    ImageF3 light;
    ImageF3 albedo;
    CameraModel camera;

    int width() const { return depth.width(); }
    int height() const { return depth.height(); }
    bool sky(int x, int y) const { return is_sky(depth(x, y)(0)); }

    /// Empty when every invariant holds; otherwise one message per violation
    /// (capped, so a broken buffer does not flood the caller).
    std::vector<std::string> violations() const;
    bool valid() const { return violations().empty(); }
};

/// Screen-space pass outputs. AO is visibility: 1 means unoccluded.
struct OutputFrame {
    ImageF1 ao;
    ImageF3 gi;
    ImageF3 ambient;
};

}  // namespace vbgi
