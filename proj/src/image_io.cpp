#include "vbgi/image_io.hpp"

#include <png.h>
#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace vbgi {
namespace {

static_assert(std::endian::native == std::endian::little, "PFM writer assumes a little-endian host");

template <int C>
std::string encode_pfm_impl(const Image<float, C>& image) {
    if (image.empty()) throw IoError("pfm: cannot encode an empty image");
    if (image.data().isNaN().any()) throw IoError("pfm: NaN values are not allowed in outputs");

    std::ostringstream header;
    header << (C == 3 ? "PF" : "Pf") << '\n' << image.width() << ' ' << image.height() << '\n' << "-1.0000\n";
    std::string out = header.str();
    const std::size_t row_bytes = std::size_t(image.width()) * C * sizeof(float);
    const std::size_t start = out.size();
    out.resize(start + row_bytes * image.height());
    for (int y = 0; y < image.height(); ++y) {
        // PFM scanlines run bottom-to-top.
        const float* src = image.data().data() + std::size_t(image.height() - 1 - y) * image.width() * C;
        std::memcpy(out.data() + start + row_bytes * y, src, row_bytes);
    }
    return out;
}

class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }

    std::string token() {
        skip_space();
        const std::size_t begin = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
        if (begin == pos_) throw IoError("pfm: truncated header", pos_);
        return std::string(bytes_.substr(begin, pos_ - begin));
    }

    // Exactly one whitespace byte separates the scale from the payload.
    void single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw IoError("pfm: expected whitespace after scale", pos_);
        ++pos_;
    }

private:
    void skip_space() {
        while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

int parse_dimension(const std::string& tok, std::size_t offset) {
    if (tok.empty() || tok.size() > 9 || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(c); }))
        throw IoError("pfm: malformed dimension '" + tok + "'", offset);
    const int v = std::stoi(tok);
    if (v < 1) throw IoError("pfm: dimension must be >= 1", offset);
    return v;
}

template <int C>
Image<float, C> decode_pfm_impl(std::string_view bytes) {
    HeaderReader reader(bytes);
    const std::string magic = reader.token();
    const std::string expected = C == 3 ? "PF" : "Pf";
    if (magic != expected) throw IoError("pfm: expected magic '" + expected + "', found '" + magic + "'", 0);

    std::size_t at = reader.offset();
    const int width = parse_dimension(reader.token(), at);
    at = reader.offset();
    const int height = parse_dimension(reader.token(), at);
    at = reader.offset();
    const std::string scale_tok = reader.token();
    double scale = 0.0;
    try {
        std::size_t used = 0;
        scale = std::stod(scale_tok, &used);
        if (used != scale_tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw IoError("pfm: malformed scale '" + scale_tok + "'", at);
    }
    if (scale == 0.0 || !std::isfinite(scale)) throw IoError("pfm: scale must be finite and non-zero", at);
    reader.single_space();

    const std::size_t start = reader.offset();
    const std::size_t row_bytes = std::size_t(width) * C * sizeof(float);
    const std::size_t payload = row_bytes * height;
    if (bytes.size() - start < payload) throw IoError("pfm: truncated payload", bytes.size());
    if (bytes.size() - start > payload) throw IoError("pfm: trailing bytes after payload", start + payload);

    Image<float, C> image(width, height);
    const bool big_endian = scale > 0.0;
    for (int y = 0; y < height; ++y) {
        float* dst = image.data().data() + std::size_t(height - 1 - y) * width * C;
        std::memcpy(dst, bytes.data() + start + row_bytes * y, row_bytes);
        if (big_endian) {
            for (std::size_t i = 0; i < std::size_t(width) * C; ++i)
                dst[i] = std::bit_cast<float>(__builtin_bswap32(std::bit_cast<std::uint32_t>(dst[i])));
        }
    }
    return image;
}

template <int C>
std::string encode_png_impl(const Image<float, C>& image, ToneMap mode) {
    if (!image.data().allFinite() || (image.data() < 0.0f).any())
        throw IoError("png: image must be finite and non-negative");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png: cannot create write struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png: cannot create info struct");
    }

    std::string out;
    std::vector<std::uint8_t> pixels(image.pixel_count() * C);
    for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = tone_map_byte(image.data().data()[i], mode);
    std::vector<png_bytep> rows(image.height());
    for (int y = 0; y < image.height(); ++y) rows[y] = pixels.data() + std::size_t(y) * image.width() * C;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png: encoder failure");
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t len) {
            static_cast<std::string*>(png_get_io_ptr(p))->append(reinterpret_cast<const char*>(data), len);
        },
        nullptr);
    png_set_compression_level(png, Z_BEST_COMPRESSION);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, image.width(), image.height(), 8, C == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

}  // namespace

std::string encode_pfm(const ImageF1& image) { return encode_pfm_impl(image); }
std::string encode_pfm(const ImageF3& image) { return encode_pfm_impl(image); }
ImageF1 decode_pfm_gray(std::string_view bytes) { return decode_pfm_impl<1>(bytes); }
ImageF3 decode_pfm_rgb(std::string_view bytes) { return decode_pfm_impl<3>(bytes); }

void save_pfm(const ImageF1& image, const std::filesystem::path& path) { write_file(path, encode_pfm(image)); }
void save_pfm(const ImageF3& image, const std::filesystem::path& path) { write_file(path, encode_pfm(image)); }
ImageF1 load_pfm_gray(const std::filesystem::path& path) { return decode_pfm_gray(read_file(path)); }
ImageF3 load_pfm_rgb(const std::filesystem::path& path) { return decode_pfm_rgb(read_file(path)); }

std::uint8_t tone_map_byte(float value, ToneMap mode) {
    double v = std::max(0.0, double(value));
    v = mode == ToneMap::ReinhardGamma22 ? v / (1.0 + v) : std::min(v, 1.0);
    return static_cast<std::uint8_t>(std::lround(255.0 * std::pow(v, 1.0 / 2.2)));
}

std::string encode_png(const ImageF1& image, ToneMap mode) { return encode_png_impl(image, mode); }
std::string encode_png(const ImageF3& image, ToneMap mode) { return encode_png_impl(image, mode); }
void save_png(const ImageF1& image, const std::filesystem::path& path, ToneMap mode) {
    write_file(path, encode_png(image, mode));
}
void save_png(const ImageF3& image, const std::filesystem::path& path, ToneMap mode) {
    write_file(path, encode_png(image, mode));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace vbgi
