#pragma once

#include "vbgi/image.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vbgi {

/// Pixel mask, row-major; nonzero entries are included.
using PixelMask = std::vector<std::uint8_t>;

/// Non-sky pixels of a depth image.
PixelMask non_sky_mask(const ImageF1& depth);

/// Differences over masked pixels; multi-channel images pool all channel
/// values. rmse = sqrt(mean(d^2)), mean_abs = mean(|d|), max_abs = max(|d|).
struct DiffMetrics {
    double rmse = 0.0;
    double mean_abs = 0.0;
    double max_abs = 0.0;
    std::size_t pixels = 0;
};

DiffMetrics compare_images(const ImageF1& a, const ImageF1& b, const PixelMask& mask = {});
DiffMetrics compare_images(const ImageF3& a, const ImageF3& b, const PixelMask& mask = {});

/// Per-pixel population variance (divide by k) across an ensemble of
/// renders, and its mean over masked pixels. Multi-channel variance is the
/// channel mean.
struct EnsembleVariance {
    ImageF1 per_pixel;
    double mean = 0.0;
};

EnsembleVariance ensemble_variance(std::span<const ImageF1> frames, const PixelMask& mask = {});
EnsembleVariance ensemble_variance(std::span<const ImageF3> frames, const PixelMask& mask = {});

/// Spatial per-channel variance over masked pixels.
Eigen::Array3d channel_variance(const ImageF3& image, const PixelMask& mask = {});

/// Per-pixel chromaticity rgb / (r + g + b); black pixels map to zero.
/// Separates hue changes from brightness changes.
ImageF3 chromaticity(const ImageF3& image);

/// Mean over masked pixels (all channels pooled).
double masked_mean(const ImageF1& image, const PixelMask& mask = {});
double masked_mean(const ImageF3& image, const PixelMask& mask = {});

/// Plain-text report: "rmse=..." lines, one key per line.
std::string format_report(const std::string& label, const DiffMetrics& m);

}  // namespace vbgi
