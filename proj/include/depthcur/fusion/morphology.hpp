#pragma once

#include "depthcur/core/raster.hpp"

#include <optional>

namespace depthcur {

/// Pixelwise OR; throws DimensionError on mismatch.
BinaryMask fuse_or(const BinaryMask& a, const BinaryMask& b);

// Square structuring elements of odd side `kernel`. Out-of-image pixels count
// as 1 for erosion and 0 for dilation, so neither operation is biased by the
// border.
BinaryMask erode(const BinaryMask& m, int kernel = 3);
BinaryMask dilate(const BinaryMask& m, int kernel);
BinaryMask morph_open(const BinaryMask& m, int kernel);
BinaryMask morph_close(const BinaryMask& m, int kernel);
/// Opening followed by closing.
BinaryMask morph_open_close(const BinaryMask& m, int kernel);

/// Fraction of ones. Throws ArgumentError on an empty mask.
double valid_fraction(const BinaryMask& m);

/// Tight bbox of the largest 4-connected component. Equal-sized components
/// resolve to the one whose bbox origin has the smaller y, then x.
std::optional<Rect> largest_region_bbox(const BinaryMask& m);

}  // namespace depthcur
