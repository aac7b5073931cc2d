#pragma once

#include "depthcur/core/raster.hpp"
#include "depthcur/pipeline/manifest.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace depthcur::testing {

/// Smooth colour ramp overlaid with random solid rectangles and discs, so
/// there are plenty of corners for ORB and structure for SSIM.
RgbImage textured_image(int width, int height, std::uint64_t seed);

/// Independent uniform noise per channel.
RgbImage noise_image(int width, int height, std::uint64_t seed);

/// Content moved by (dx, dy) pixels; uncovered area is filled from `fill`.
RgbImage shifted(const RgbImage& img, int dx, int dy, std::uint8_t fill = 0);

/// Replace the left half with noise.
RgbImage left_half_noise(const RgbImage& img, std::uint64_t seed);

GrayImage random_gray(int width, int height, std::uint64_t seed);

/// Positive synthetic depth with a smooth slant plus per-rectangle offsets.
DepthMap synthetic_depth(int width, int height, std::uint64_t seed);

class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

enum class GenKind { Same, Noise, Shifted, HalfNoise };

/// Writes depth.pfm, orig.png and gen_*.png for one entry under `dir` and
/// returns the manifest line (paths relative to `dir`).
std::string write_entry(const std::filesystem::path& dir, const std::string& id, int width, int height,
                        std::uint64_t seed, GenKind kind, int variants = 1);

std::string read_file(const std::filesystem::path& p);

}  // namespace depthcur::testing
