#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace vbgi {

/// Occupancy bit field over the N_b uniform angular sectors of one
/// hemisphere slice. Sector k spans relative angles
/// [-pi/2 + k*pi/N_b, -pi/2 + (k+1)*pi/N_b), measured from the projected
/// normal. `Words` 64-bit words hold up to 64*Words sectors; only the low
/// `sectors()` bits are ever set.
template <std::size_t Words>
class SectorMask {
public:
    static constexpr int kCapacity = int(64 * Words);

    SectorMask() = default;
    explicit SectorMask(int sectors) : sectors_(sectors) {
        if (sectors < 1 || sectors > kCapacity) throw std::invalid_argument("sector count exceeds mask capacity");
    }

    /// Mask with sectors [first, end) set. Empty when end <= first.
    static SectorMask range(int sectors, int first, int end) {
        SectorMask m(sectors);
        first = std::clamp(first, 0, sectors);
        end = std::clamp(end, 0, sectors);
        if (end <= first) return m;
        if constexpr (Words == 1) {
            const int width = end - first;
            const std::uint64_t run = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
            m.words_[0] = run << first;
        } else {
            for (std::size_t w = 0; w < Words; ++w) {
                const int lo = std::max(first, int(w * 64));
                const int hi = std::min(end, int(w * 64 + 64));
                if (hi <= lo) continue;
                const int width = hi - lo;
                const std::uint64_t run = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
                m.words_[w] = run << (lo - int(w * 64));
            }
        }
        return m;
    }
    static SectorMask full(int sectors) { return range(sectors, 0, sectors); }

    int sectors() const { return sectors_; }
    std::uint64_t word(std::size_t i) const { return words_[i]; }

    bool test(int k) const { return (words_[std::size_t(k) / 64] >> (k % 64)) & 1u; }
    void set(int k) {
        if (k < 0 || k >= sectors_) throw std::out_of_range("sector index");
        words_[std::size_t(k) / 64] |= std::uint64_t{1} << (k % 64);
    }

    int count() const {
        int n = 0;
        for (auto w : words_) n += std::popcount(w);
        return n;
    }
    bool none() const { return count() == 0; }

    SectorMask operator|(const SectorMask& o) const { return combine(o, [](auto a, auto b) { return a | b; }); }
    SectorMask operator&(const SectorMask& o) const { return combine(o, [](auto a, auto b) { return a & b; }); }
    SectorMask operator~() const {
        SectorMask m = full(sectors_);
        for (std::size_t w = 0; w < Words; ++w) m.words_[w] &= ~words_[w];
        return m;
    }
    SectorMask& operator|=(const SectorMask& o) { return *this = *this | o; }

    bool operator==(const SectorMask& o) const = default;

    bool subset_of(const SectorMask& o) const { return (*this & o) == *this; }

    /// Mask with sector k moved to N_b - 1 - k (reflection about the normal).
    SectorMask reflected() const {
        SectorMask m(sectors_);
        for (int k = 0; k < sectors_; ++k)
            if (test(k)) m.set(sectors_ - 1 - k);
        return m;
    }

private:
    template <typename Op>
    SectorMask combine(const SectorMask& o, Op op) const {
        SectorMask m(sectors_);
        for (std::size_t w = 0; w < Words; ++w) m.words_[w] = op(words_[w], o.words_[w]);
        return m;
    }

    std::array<std::uint64_t, Words> words_{};
    int sectors_ = 32;
};

/// The production mask: one machine word, N_b <= 64.
using VisibilityBitmask = SectorMask<1>;

constexpr std::size_t words_for_sectors(int sectors) { return (std::size_t(sectors) + 63) / 64; }

/// True for the sector counts the passes accept: powers of two in [8, 4096].
constexpr bool supported_sector_count(int sectors) {
    return sectors >= 8 && sectors <= 4096 && std::has_single_bit(unsigned(sectors));
}

/// Continuous sector coordinate of a relative angle: -pi/2 maps to 0 and
/// +pi/2 maps to N_b. Angles outside the hemisphere are clamped.
template <typename Scalar>
double sector_coordinate(Scalar theta, int sectors) {
    constexpr double half_pi = std::numbers::pi / 2;
    const double clamped = std::clamp(double(theta), -half_pi, half_pi);
    return (clamped + half_pi) * sectors / std::numbers::pi;
}

/// Sectors covered by the occluder arc [theta_min, theta_max] (radians,
/// relative to the projected normal). A sector counts when at least half of
/// it is covered; exact half coverage counts. Constant time for
/// single-word masks.
template <std::size_t Words = 1, typename Scalar>
SectorMask<Words> sectors_from_arc(Scalar theta_min, Scalar theta_max, int sectors) {
    if (theta_max < theta_min) std::swap(theta_min, theta_max);
    const double u_min = sector_coordinate(theta_min, sectors);
    const double u_max = sector_coordinate(theta_max, sectors);

    const double cell_min = std::floor(u_min);
    if (cell_min == std::floor(u_max)) {
        // Arc lies inside one sector: the rounding form below would set it
        // whenever the arc straddles the sector center.
        SectorMask<Words> m(sectors);
        const int k = int(cell_min);
        if (k < sectors && u_max - u_min >= 0.5) m.set(k);
        return m;
    }
    const int first = int(std::ceil(u_min - 0.5));
    const int end = int(std::floor(u_max - 0.5)) + 1;
    return SectorMask<Words>::range(sectors, first, end);
}

template <std::size_t Words>
SectorMask<Words> merge(const SectorMask<Words>& acc, const SectorMask<Words>& sample) {
    return acc | sample;
}

/// Sectors set in `sample` that `acc` has not occluded yet.
template <std::size_t Words>
int newly_unoccluded_count(const SectorMask<Words>& sample, const SectorMask<Words>& acc) {
    return (sample & ~acc).count();
}

/// Unoccluded fraction of the slice.
template <std::size_t Words>
double visibility(const SectorMask<Words>& acc) {
    return 1.0 - double(acc.count()) / acc.sectors();
}

/// Relative angle of the center of sector k.
inline double sector_center_angle(int k, int sectors) {
    return -std::numbers::pi / 2 + (k + 0.5) * std::numbers::pi / sectors;
}

}  // namespace vbgi
