#pragma once

#include "depthcur/core/raster.hpp"

#include <array>
#include <optional>

namespace depthcur {

inline constexpr int kSsimWindow = 11;

struct SsimParams {
    double sigma = 1.5;
    double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    double threshold = 0.85;
};

/// Normalized 1-D Gaussian taps; the 2-D window is their outer product.
std::array<double, kSsimWindow> ssim_gaussian_taps(double sigma);

struct SsimMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> coverage;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    bool covered(int x, int y) const { return coverage[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Per-pixel SSIM with Gaussian-weighted local moments and edge-replicated
/// borders. A pixel whose window touches any uncovered pixel of `coverage`
/// is itself uncovered and carries value 0.
SsimMap ssim_map(const GrayImage& a, const GrayImage& b, const SsimParams& params = {},
                 const std::optional<BinaryMask>& coverage = std::nullopt);

/// bit = covered && value > threshold.
BinaryMask threshold_map(const SsimMap& map, double threshold);

/// Mean over covered pixels. Throws DegenerateError when nothing is covered.
double mean_ssim(const SsimMap& map);

}  // namespace depthcur
