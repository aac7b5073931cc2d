#pragma once

#include "depthcur/core/raster.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace depthcur {

struct Keypoint {
    double x = 0.0;  // level-0 pixel coordinates
    double y = 0.0;
    int octave = 0;
    double angle = 0.0;  // radians in [0, 2*pi)
    double response = 0.0;
};

struct Descriptor256 {
    std::array<std::uint64_t, 4> words{};

    friend bool operator==(const Descriptor256&, const Descriptor256&) = default;
};

inline int hamming(const Descriptor256& a, const Descriptor256& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.words.size(); ++i) d += std::popcount(a.words[i] ^ b.words[i]);
    return d;
}

struct Feature {
    Keypoint keypoint;
    Descriptor256 descriptor;
};

struct OrbParams {
    int max_features = 1000;
    int fast_threshold = 20;
    int levels = 8;
    double scale_factor = 1.2;
    int patch_size = 31;
};

/// Minimum side length accepted by detect_orb.
inline constexpr int kOrbMinSide = 31;

/// Oriented FAST corners with steered BRIEF descriptors, Harris-ranked.
/// Output is sorted by (octave, y, x, angle) so it is reproducible regardless
/// of internal scheduling. Throws ArgumentError below 31x31.
std::vector<Feature> detect_orb(const GrayImage& image, const OrbParams& params = {});

struct Match {
    int index_a = 0;
    int index_b = 0;
    int hamming = 0;

    friend bool operator==(const Match&, const Match&) = default;
};

/// Brute-force Hamming nearest neighbour, kept only when mutual. Ties go to
/// the lower index. Sorted by index_a.
std::vector<Match> match_descriptors(std::span<const Descriptor256> a,
                                     std::span<const Descriptor256> b);

}  // namespace depthcur
