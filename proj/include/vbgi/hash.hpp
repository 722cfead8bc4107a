#pragma once

#include <cstdint>
#include <initializer_list>

namespace vbgi {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Order-sensitive hash of a key tuple. Stable across runs, platforms, and
/// thread schedules.
constexpr std::uint64_t stable_hash(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0x51ab1e5eedull;
    for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
    return h;
}

/// Uniform double in [0, 1) from the top 53 bits of a hash.
constexpr double hash_to_unit(std::uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

constexpr double stable_hash01(std::initializer_list<std::uint64_t> keys) { return hash_to_unit(stable_hash(keys)); }

// Salts keep independent random streams apart.
enum class Stream : std::uint64_t {
    SliceOffset = 1,
    StepJitter = 2,
    SsrRay = 3,
    ReferenceRay = 4,
};

}  // namespace vbgi
