#pragma once

#include "depthcur/core/raster.hpp"
#include "depthcur/registration/affine.hpp"

namespace depthcur {

template <class Image>
struct Warped {
    Image image;
    BinaryMask coverage;
};

// Inverse-mapped bilinear warp: destination pixel p samples the source at
// t^-1(p). Destinations that map outside the source get value 0 and
// coverage 0. Throws DegenerateError for a singular transform.
Warped<GrayImage> warp_affine(const GrayImage& image, const AffineTransform& t, int out_w, int out_h);
Warped<RgbImage> warp_affine(const RgbImage& image, const AffineTransform& t, int out_w, int out_h);

}  // namespace depthcur
