#pragma once

#include "depthcur/core/raster.hpp"
#include "depthcur/random.hpp"

#include <optional>

namespace depthcur {

/// Crop of side `size` centered on `bbox`, shifted by (jitter_x, jitter_y),
/// then clamped to lie inside a width x height image. Returns nullopt when
/// the image is smaller than the crop.
std::optional<Rect> place_crop(const Rect& bbox, int width, int height, int size,
                               int jitter_x, int jitter_y);

/// place_crop around the mask's largest region with a uniform integer jitter
/// in [-size/4, size/4] per axis drawn from `rng`.
std::optional<Rect> select_crop(const BinaryMask& m, int width, int height, int size, Rng& rng);

}  // namespace depthcur
