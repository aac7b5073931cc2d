#include "depthcur/core/raster.hpp"

#include "depthcur/error.hpp"

#include <algorithm>
#include <string>

namespace depthcur {

namespace {

std::size_t checked_area(int w, int h, std::size_t channels) {
    if (w < 1 || h < 1) {
        throw ArgumentError("raster dimensions must be positive, got " + std::to_string(w) +
                            "x" + std::to_string(h));
    }
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
}

}  // namespace

RgbImage::RgbImage(int w, int h) : width(w), height(h), data(checked_area(w, h, 3), 0) {}

GrayImage::GrayImage(int w, int h, double fill)
    : width(w), height(h), data(checked_area(w, h, 1), fill) {}

BinaryMask::BinaryMask(int w, int h, std::uint8_t fill)
    : width(w), height(h), bits(checked_area(w, h, 1), fill ? 1 : 0) {}

std::size_t BinaryMask::count_ones() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

}  // namespace depthcur
