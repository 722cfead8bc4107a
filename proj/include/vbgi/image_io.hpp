#pragma once

#include "vbgi/image.hpp"

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vbgi {

/// I/O failure. `offset` is the byte position in the stream where decoding
/// failed (0 for failures not tied to a position, e.g. open errors).
class IoError : public std::runtime_error {
public:
    IoError(const std::string& what, std::size_t offset = 0)
        : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// PFM: "Pf" is single channel, "PF" is RGB. Files are written little-endian
// (negative scale) with rows stored bottom-to-top. NaN is rejected on write;
// +inf is allowed because depth uses it as the sky sentinel.
std::string encode_pfm(const ImageF1& image);
std::string encode_pfm(const ImageF3& image);
ImageF1 decode_pfm_gray(std::string_view bytes);
ImageF3 decode_pfm_rgb(std::string_view bytes);

void save_pfm(const ImageF1& image, const std::filesystem::path& path);
void save_pfm(const ImageF3& image, const std::filesystem::path& path);
ImageF1 load_pfm_gray(const std::filesystem::path& path);
ImageF3 load_pfm_rgb(const std::filesystem::path& path);

enum class ToneMap { ClampGamma22, ReinhardGamma22 };

/// 8-bit value for one linear channel value under the given tone map.
std::uint8_t tone_map_byte(float value, ToneMap mode);

std::string encode_png(const ImageF1& image, ToneMap mode);
std::string encode_png(const ImageF3& image, ToneMap mode);
void save_png(const ImageF1& image, const std::filesystem::path& path, ToneMap mode = ToneMap::ClampGamma22);
void save_png(const ImageF3& image, const std::filesystem::path& path, ToneMap mode = ToneMap::ClampGamma22);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace vbgi
