#pragma once

#include <Eigen/Core>

#include <cassert>
#include <cstddef>
#include <stdexcept>

namespace vbgi {

/// Dense multi-channel image. Pixels are stored as the columns of an Eigen
/// array, row-major over the image (row 0 is the top of the frame).
template <typename Scalar, int Channels>
class Image {
public:
    using Pixel = Eigen::Array<Scalar, Channels, 1>;
    using Storage = Eigen::Array<Scalar, Channels, Eigen::Dynamic>;

    Image() = default;
    Image(int width, int height, const Pixel& fill = Pixel::Zero())
        : width_(width), height_(height), data_(Channels, std::size_t(width) * height) {
        if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
        data_.colwise() = fill;
    }

    static constexpr int channels() { return Channels; }
    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return std::size_t(width_) * height_; }
    bool empty() const { return pixel_count() == 0; }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    auto operator()(int x, int y) { return data_.col(index(x, y)); }
    auto operator()(int x, int y) const { return data_.col(index(x, y)); }

    Storage& data() { return data_; }
    const Storage& data() const { return data_; }

    template <typename Other>
    bool same_shape(const Other& other) const {
        return width_ == other.width() && height_ == other.height();
    }

    bool operator==(const Image& other) const {
        return same_shape(other) && (data_ == other.data_).all();
    }

private:
    Eigen::Index index(int x, int y) const {
        assert(contains(x, y));
        return Eigen::Index(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    Storage data_;
};

using ImageF1 = Image<float, 1>;
using ImageF3 = Image<float, 3>;

}  // namespace vbgi
