#include "depthcur/ssim.hpp"

#include "depthcur/error.hpp"

#include <algorithm>
#include <cmath>

namespace depthcur {

namespace {

constexpr int kRadius = kSsimWindow / 2;

// Separable Gaussian blur with edge replication.
std::vector<double> blur(const std::vector<double>& src, int w, int h,
                         const std::array<double, kSsimWindow>& taps) {
    std::vector<double> tmp(src.size());
    for (int y = 0; y < h; ++y) {
        const double* row = &src[static_cast<std::size_t>(y) * w];
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -kRadius; k <= kRadius; ++k) {
                acc += taps[k + kRadius] * row[std::clamp(x + k, 0, w - 1)];
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    std::vector<double> out(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -kRadius; k <= kRadius; ++k) {
                acc += taps[k + kRadius] * tmp[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
            }
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    return out;
}

// A pixel stays covered only if every (clamped) window sample is covered,
// i.e. a square erosion with replicated borders.
std::vector<std::uint8_t> window_coverage(const BinaryMask& mask) {
    const int w = mask.width;
    const int h = mask.height;
    std::vector<std::uint8_t> rows(mask.bits.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t all = 1;
            for (int k = -kRadius; k <= kRadius && all; ++k) all = mask.at(std::clamp(x + k, 0, w - 1), y);
            rows[static_cast<std::size_t>(y) * w + x] = all;
        }
    }
    std::vector<std::uint8_t> out(mask.bits.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t all = 1;
            for (int k = -kRadius; k <= kRadius && all; ++k) {
                all = rows[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
            }
            out[static_cast<std::size_t>(y) * w + x] = all;
        }
    }
    return out;
}

}  // namespace

std::array<double, kSsimWindow> ssim_gaussian_taps(double sigma) {
    std::array<double, kSsimWindow> taps{};
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
        const double d = i - kRadius;
        taps[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        sum += taps[i];
    }
    for (auto& t : taps) t /= sum;
    return taps;
}

SsimMap ssim_map(const GrayImage& a, const GrayImage& b, const SsimParams& params,
                 const std::optional<BinaryMask>& coverage) {
    if (!same_size(a, b)) throw DimensionError("ssim_map: operand dimensions differ");
    if (coverage && !same_size(*coverage, a)) throw DimensionError("ssim_map: coverage dimensions differ");

    const int w = a.width;
    const int h = a.height;
    const std::size_t n = a.data.size();
    const auto taps = ssim_gaussian_taps(params.sigma);

    std::vector<double> aa(n), bb(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
        aa[i] = a.data[i] * a.data[i];
        bb[i] = b.data[i] * b.data[i];
        ab[i] = a.data[i] * b.data[i];
    }
    const auto mu_a = blur(a.data, w, h, taps);
    const auto mu_b = blur(b.data, w, h, taps);
    const auto e_aa = blur(aa, w, h, taps);
    const auto e_bb = blur(bb, w, h, taps);
    const auto e_ab = blur(ab, w, h, taps);

    SsimMap out;
    out.width = w;
    out.height = h;
    out.values.assign(n, 0.0);
    out.coverage = coverage ? window_coverage(*coverage) : std::vector<std::uint8_t>(n, 1);

    for (std::size_t i = 0; i < n; ++i) {
        if (!out.coverage[i]) continue;
        const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
        const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
        const double cov = e_ab[i] - mu_a[i] * mu_b[i];
        const double num = (2.0 * mu_a[i] * mu_b[i] + params.c1) * (2.0 * cov + params.c2);
        const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + params.c1) * (var_a + var_b + params.c2);
        out.values[i] = std::clamp(num / den, -1.0, 1.0);
    }
    return out;
}

BinaryMask threshold_map(const SsimMap& map, double threshold) {
    BinaryMask mask(map.width, map.height);
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        mask.bits[i] = (map.coverage[i] && map.values[i] > threshold) ? 1 : 0;
    }
    return mask;
}

double mean_ssim(const SsimMap& map) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        if (map.coverage[i]) {
            sum += map.values[i];
            ++n;
        }
    }
    if (n == 0) throw DegenerateError("mean_ssim: no covered pixels");
    return sum / static_cast<double>(n);
}

}  // namespace depthcur
