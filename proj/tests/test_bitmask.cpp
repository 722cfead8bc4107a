#include "test_support.hpp"

#include "vbgi/bitmask.hpp"
#include "vbgi/oracle.hpp"

#include <algorithm>
#include <numbers>
#include <random>

namespace vbgi {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(SectorsFromArc, FullHemisphere) {
    EXPECT_EQ(sectors_from_arc(-kPi / 2, kPi / 2, 32).word(0), 0xFFFFFFFFull);
    EXPECT_EQ(sectors_from_arc(-kPi, kPi, 64).word(0), ~0ull);
}

TEST(SectorsFromArc, UpperHalf) { EXPECT_EQ(sectors_from_arc(0.0, kPi / 2, 32).word(0), 0xFFFF0000ull); }

TEST(SectorsFromArc, QuarterSectorIsBelowHalfCoverage) {
    EXPECT_EQ(sectors_from_arc(0.0, kPi / 128, 32).word(0), 0u);
    EXPECT_EQ(sectors_bruteforce(0.0, kPi / 128, 32).word(0), 0u);
}

TEST(SectorsFromArc, TwoFullSectorsOfFour) { EXPECT_EQ(sectors_from_arc(-kPi / 2, 0.0, 4).word(0), 0b0011u); }

TEST(SectorsFromArc, HalfCoverageThreshold) {
    const double w = kPi / 32;
    EXPECT_TRUE(sectors_from_arc(0.0, 0.5001 * w, 32).test(16));
    EXPECT_TRUE(sectors_from_arc(0.0, 0.4999 * w, 32).none());
    // Arc across a boundary: each side is judged on its own share.
    const auto m = sectors_from_arc(0.45 * w, 1.45 * w, 32);
    EXPECT_EQ(m.count(), 1);
    EXPECT_TRUE(m.test(16));
    // An arc inside one sector straddling its center but shorter than half
    // a sector stays clear.
    EXPECT_TRUE(sectors_from_arc(0.3 * w, 0.7 * w, 32).none());
}

TEST(SectorsFromArc, EmptyAndOutOfRangeArcs) {
    EXPECT_TRUE(sectors_from_arc(0.4, 0.4, 32).none());
    EXPECT_TRUE(sectors_from_arc(2.0, 3.0, 32).none());    // beyond +pi/2
    EXPECT_TRUE(sectors_from_arc(-3.0, -2.0, 32).none());  // beyond -pi/2
    EXPECT_EQ(sectors_from_arc(0.5, 0.1, 32), sectors_from_arc(0.1, 0.5, 32));
}

TEST(SectorsFromArc, MatchesBruteForceOnRandomArcsAllWidths) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 20000; ++i) {
        const double a = u(rng), b = u(rng);
        EXPECT_EQ(sectors_from_arc<1>(a, b, 8), sectors_bruteforce<1>(a, b, 8));
        EXPECT_EQ(sectors_from_arc<1>(a, b, 16), sectors_bruteforce<1>(a, b, 16));
        EXPECT_EQ(sectors_from_arc<1>(a, b, 64), sectors_bruteforce<1>(a, b, 64));
        EXPECT_EQ(sectors_from_arc<2>(a, b, 128), sectors_bruteforce<2>(a, b, 128));
        EXPECT_EQ(sectors_from_arc<64>(a, b, 4096), sectors_bruteforce<64>(a, b, 4096));
    }
}

TEST(SectorsFromArc, WideningNeverClearsBits) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.7, 1.7), d(0.0, 0.3);
    for (int i = 0; i < 5000; ++i) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        const auto inner = sectors_from_arc(a, b, 32);
        EXPECT_TRUE(inner.subset_of(sectors_from_arc(a - d(rng), b + d(rng), 32)));
    }
}

TEST(SectorsFromArc, SplitArcsNeverExceedTheWholeArc) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.6, 1.6);
    for (int i = 0; i < 5000; ++i) {
        std::array<double, 3> v{u(rng), u(rng), u(rng)};
        std::sort(v.begin(), v.end());
        const auto whole = sectors_from_arc(v[0], v[2], 32);
        const auto split = merge(sectors_from_arc(v[0], v[1], 32), sectors_from_arc(v[1], v[2], 32));
        EXPECT_TRUE(split.subset_of(whole));
    }
}

TEST(SectorsFromArc, SplitAtSectorBoundaryIsExact) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.6, 1.6);
    std::uniform_int_distribution<int> k(0, 32);
    for (int i = 0; i < 5000; ++i) {
        const double b = -kPi / 2 + k(rng) * kPi / 32;
        const double a = std::min(u(rng), b), c = std::max(u(rng), b);
        EXPECT_EQ(merge(sectors_from_arc(a, b, 32), sectors_from_arc(b, c, 32)), sectors_from_arc(a, c, 32));
    }
}

TEST(SectorsFromArc, SplitInsideASectorCanLoseIt) {
    // Sector 16 covered 0.7 as one arc but 0.3 + 0.4 as two pieces.
    const double w = kPi / 32;
    const auto whole = sectors_from_arc(0.2 * w, 0.9 * w, 32);
    const auto split = merge(sectors_from_arc(0.2 * w, 0.5 * w, 32), sectors_from_arc(0.5 * w, 0.9 * w, 32));
    EXPECT_TRUE(whole.test(16));
    EXPECT_TRUE(split.none());
}

TEST(SectorsFromArc, ReflectionAboutNormal) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.6, 1.6);
    for (int i = 0; i < 5000; ++i) {
        const double a = u(rng), b = u(rng);
        EXPECT_EQ(sectors_from_arc(a, b, 32).reflected(), sectors_from_arc(-b, -a, 32));
    }
}

VisibilityBitmask mask8(std::uint64_t bits) {
    VisibilityBitmask m(8);
    for (int k = 0; k < 8; ++k)
        if ((bits >> k) & 1u) m.set(k);
    return m;
}

TEST(Merge, IdentityIdempotenceCommutativity) {
    const auto x = mask8(0b10110010);
    EXPECT_EQ(merge(x, VisibilityBitmask(8)), x);
    EXPECT_EQ(merge(x, x), x);
    EXPECT_EQ(merge(x, mask8(0b01)), merge(mask8(0b01), x));
    EXPECT_GE(merge(x, mask8(0b01)).count(), x.count());
}

TEST(Merge, OrderIndependentOverPermutations) {
    std::mt19937_64 rng(6);
    std::vector<VisibilityBitmask> masks;
    for (int i = 0; i < 10; ++i) {
        VisibilityBitmask m(32);
        for (int k = 0; k < 32; ++k)
            if (rng() % 7 == 0) m.set(k);
        masks.push_back(m);
    }
    auto fold = [&] {
        VisibilityBitmask acc(32);
        for (const auto& m : masks) acc = merge(acc, m);
        return acc;
    };
    const auto reference = fold();
    for (int trial = 0; trial < 50; ++trial) {
        std::shuffle(masks.begin(), masks.end(), rng);
        EXPECT_EQ(fold(), reference);
    }
}

TEST(NewlyUnoccluded, Examples) {
    const auto x = mask8(0b01101100);
    EXPECT_EQ(newly_unoccluded_count(x, x), 0);
    EXPECT_EQ(newly_unoccluded_count(x, VisibilityBitmask(8)), x.count());
    EXPECT_EQ(newly_unoccluded_count(mask8(0xF0), mask8(0x30)), 2);
}

TEST(Visibility, Examples) {
    EXPECT_DOUBLE_EQ(visibility(VisibilityBitmask(32)), 1.0);
    EXPECT_DOUBLE_EQ(visibility(VisibilityBitmask::full(32)), 0.0);
    EXPECT_DOUBLE_EQ(visibility(VisibilityBitmask::range(32, 4, 12)), 0.75);
}

TEST(SectorMask, OnlyLowBitsAreEverSet) {
    const auto full = VisibilityBitmask::full(8);
    EXPECT_EQ(full.word(0), 0xFFu);
    EXPECT_EQ((~VisibilityBitmask(8)).word(0), 0xFFu);
    EXPECT_EQ(sectors_from_arc(-5.0, 5.0, 16).word(0), 0xFFFFu);
    EXPECT_THROW(VisibilityBitmask(65), std::invalid_argument);
    EXPECT_THROW(VisibilityBitmask(8).set(8), std::out_of_range);
}

TEST(SectorMask, MultiWordRanges) {
    const auto m = SectorMask<2>::range(128, 60, 70);
    EXPECT_EQ(m.count(), 10);
    EXPECT_TRUE(m.test(60));
    EXPECT_TRUE(m.test(69));
    EXPECT_FALSE(m.test(70));
    EXPECT_EQ(SectorMask<2>::full(128).count(), 128);
    EXPECT_EQ((~m).count(), 118);
    EXPECT_EQ(m.reflected(), SectorMask<2>::range(128, 58, 68));
}

TEST(SectorCounts, SupportedSet) {
    for (int n : {8, 16, 32, 64, 128, 4096}) EXPECT_TRUE(supported_sector_count(n)) << n;
    for (int n : {0, 4, 12, 33, 100, 8192}) EXPECT_FALSE(supported_sector_count(n)) << n;
    EXPECT_EQ(words_for_sectors(32), 1u);
    EXPECT_EQ(words_for_sectors(128), 2u);
    EXPECT_EQ(words_for_sectors(4096), 64u);
}

TEST(SectorCenters, SymmetricAboutNormal) {
    for (int k = 0; k < 32; ++k) EXPECT_NEAR(sector_center_angle(k, 32), -sector_center_angle(31 - k, 32), 1e-15);
    EXPECT_NEAR(sector_center_angle(0, 4), -3 * kPi / 8, 1e-15);
}

}  // namespace
}  // namespace vbgi
