#include "vbgi/metrics.hpp"

#include "vbgi/camera.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace vbgi {
namespace {

bool included(const PixelMask& mask, std::size_t i) { return mask.empty() || mask[i] != 0; }

template <int C>
void check_mask(const Image<float, C>& img, const PixelMask& mask) {
    if (!mask.empty() && mask.size() != img.pixel_count()) throw std::invalid_argument("mask size mismatch");
}

template <int C>
DiffMetrics compare_impl(const Image<float, C>& a, const Image<float, C>& b, const PixelMask& mask) {
    if (!a.same_shape(b)) throw std::invalid_argument("compare: image dimensions differ");
    check_mask(a, mask);
    DiffMetrics m;
    double sq = 0.0;
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        if (!included(mask, i)) continue;
        ++m.pixels;
        for (int c = 0; c < C; ++c) {
            const double d = double(a.data()(c, Eigen::Index(i))) - double(b.data()(c, Eigen::Index(i)));
            sq += d * d;
            abs_sum += std::abs(d);
            m.max_abs = std::max(m.max_abs, std::abs(d));
        }
    }
    if (m.pixels > 0) {
        const double n = double(m.pixels) * C;
        m.rmse = std::sqrt(sq / n);
        m.mean_abs = abs_sum / n;
    }
    return m;
}

template <int C>
EnsembleVariance variance_impl(std::span<const Image<float, C>> frames, const PixelMask& mask) {
    if (frames.empty()) throw std::invalid_argument("ensemble_variance: no frames");
    const auto& first = frames.front();
    for (const auto& f : frames)
        if (!f.same_shape(first)) throw std::invalid_argument("ensemble_variance: image dimensions differ");
    check_mask(first, mask);

    EnsembleVariance out{ImageF1(first.width(), first.height()), 0.0};
    const double k = double(frames.size());
    double total = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < first.pixel_count(); ++i) {
        double var = 0.0;
        for (int c = 0; c < C; ++c) {
            double mean = 0.0;
            for (const auto& f : frames) mean += f.data()(c, Eigen::Index(i));
            mean /= k;
            double acc = 0.0;
            for (const auto& f : frames) {
                const double d = f.data()(c, Eigen::Index(i)) - mean;
                acc += d * d;
            }
            var += acc / k;
        }
        var /= C;
        out.per_pixel.data()(0, Eigen::Index(i)) = float(var);
        if (included(mask, i)) {
            total += var;
            ++counted;
        }
    }
    out.mean = counted ? total / counted : 0.0;
    return out;
}

template <int C>
double mean_impl(const Image<float, C>& img, const PixelMask& mask) {
    check_mask(img, mask);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        if (!included(mask, i)) continue;
        for (int c = 0; c < C; ++c) sum += img.data()(c, Eigen::Index(i));
        n += C;
    }
    return n ? sum / n : 0.0;
}

}  // namespace

PixelMask non_sky_mask(const ImageF1& depth) {
    PixelMask mask(depth.pixel_count());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = is_sky(depth.data()(0, Eigen::Index(i))) ? 0 : 1;
    return mask;
}

DiffMetrics compare_images(const ImageF1& a, const ImageF1& b, const PixelMask& mask) { return compare_impl(a, b, mask); }
DiffMetrics compare_images(const ImageF3& a, const ImageF3& b, const PixelMask& mask) { return compare_impl(a, b, mask); }

EnsembleVariance ensemble_variance(std::span<const ImageF1> frames, const PixelMask& mask) {
    return variance_impl<1>(frames, mask);
}
EnsembleVariance ensemble_variance(std::span<const ImageF3> frames, const PixelMask& mask) {
    return variance_impl<3>(frames, mask);
}

Eigen::Array3d channel_variance(const ImageF3& image, const PixelMask& mask) {
    check_mask(image, mask);
    Eigen::Array3d sum = Eigen::Array3d::Zero();
    Eigen::Array3d sq = Eigen::Array3d::Zero();
    std::size_t n = 0;
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        if (!included(mask, i)) continue;
        const Eigen::Array3d v = image.data().col(Eigen::Index(i)).cast<double>();
        sum += v;
        sq += v * v;
        ++n;
    }
    if (n == 0) return Eigen::Array3d::Zero();
    const Eigen::Array3d mean = sum / double(n);
    return (sq / double(n) - mean * mean).max(0.0);
}

ImageF3 chromaticity(const ImageF3& image) {
    ImageF3 out(image.width(), image.height());
    for (Eigen::Index i = 0; i < Eigen::Index(image.pixel_count()); ++i) {
        const Eigen::Array3f c = image.data().col(i);
        const float sum = c.sum();
        out.data().col(i) = sum > 0.0f ? Eigen::Array3f(c / sum) : Eigen::Array3f(Eigen::Array3f::Zero());
    }
    return out;
}

double masked_mean(const ImageF1& image, const PixelMask& mask) { return mean_impl(image, mask); }
double masked_mean(const ImageF3& image, const PixelMask& mask) { return mean_impl(image, mask); }

std::string format_report(const std::string& label, const DiffMetrics& m) {
    std::ostringstream os;
    os << std::setprecision(9);
    os << "[" << label << "]\n"
       << "pixels=" << m.pixels << "\n"
       << "rmse=" << m.rmse << "\n"
       << "mean_abs=" << m.mean_abs << "\n"
       << "max_abs=" << m.max_abs << "\n";
    return os.str();
}

}  // namespace vbgi
