#pragma once

#include "depthcur/core/raster.hpp"

namespace depthcur {

DisparityMap depth_to_disparity(const DepthMap& depth);

/// Inverse of depth_to_disparity. Zero disparity has no finite depth and is
/// marked invalid.
DepthMap disparity_to_depth(const DisparityMap& disparity);

/// Rec.601 luma: 0.299 R + 0.587 G + 0.114 B.
GrayImage rgb_to_luma(const RgbImage& image);

// Bilinear resampling with half-pixel centers; same-size input is returned
// unchanged. Throws ArgumentError on a zero target dimension.
GrayImage resize_bilinear(const GrayImage& image, int width, int height);
RgbImage resize_bilinear(const RgbImage& image, int width, int height);

}  // namespace depthcur
