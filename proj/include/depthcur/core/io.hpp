#pragma once

#include "depthcur/core/raster.hpp"

#include <filesystem>
#include <string_view>

namespace depthcur {

enum class DepthFormat { Pfm, Png16 };

/// Picks a format from the file extension (.pfm or .png).
DepthFormat depth_format_from_path(const std::filesystem::path& path);

/// Loads a depth map.
///
/// PFM: single-channel "Pf" only. A negative scale line means little-endian
/// samples; rows are stored bottom-to-top. Non-finite or non-positive samples
/// become invalid. PNG16: code v maps to v * scale, code 0 is invalid.
/// `scale` is ignored for PFM and must be > 0 for PNG16.
DepthMap load_depth(const std::filesystem::path& path, DepthFormat format, double scale = 1.0);

/// Writes a little-endian "Pf" file. Invalid pixels are written as 0.
void save_depth_pfm(const DepthMap& depth, const std::filesystem::path& path);

/// Writes a 16-bit PNG with code round(value / scale); invalid pixels get 0.
void save_depth_png16(const DepthMap& depth, const std::filesystem::path& path, double scale);

/// Loads a disparity PFM. Non-finite or negative samples become invalid.
DisparityMap load_disparity_pfm(const std::filesystem::path& path);
void save_disparity_pfm(const DisparityMap& disparity, const std::filesystem::path& path);

/// 8-bit grayscale PNG, 0 <-> 0 and 1 <-> 255. Any other code fails to load.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);
BinaryMask load_mask(const std::filesystem::path& path);

RgbImage load_rgb(const std::filesystem::path& path);
void save_rgb(const RgbImage& image, const std::filesystem::path& path);

/// Writes `bytes` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace depthcur
