#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace depthcur {

struct Rect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// 8-bit interleaved RGB, row-major.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    RgbImage() = default;
    RgbImage(int w, int h);

    std::size_t index(int x, int y) const {
        return (static_cast<std::size_t>(y) * width + x) * 3;
    }
    std::uint8_t& at(int x, int y, int c) { return data[index(x, y) + c]; }
    std::uint8_t at(int x, int y, int c) const { return data[index(x, y) + c]; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Floating luma in [0, 255], row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0);

    std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
    std::size_t count_ones() const;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

/// Floating grid with a per-pixel validity flag. The tag keeps depth and
/// disparity from being mixed up at compile time.
template <class Tag>
struct MaskedField {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;

    MaskedField() = default;
    MaskedField(int w, int h, double fill = 0.0, bool is_valid = true)
        : width(w),
          height(h),
          values(static_cast<std::size_t>(w) * h, fill),
          valid(static_cast<std::size_t>(w) * h, is_valid ? 1 : 0) {}

    std::size_t size() const { return values.size(); }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    bool is_valid(std::size_t i) const { return valid[i] != 0; }
    std::size_t valid_count() const {
        std::size_t n = 0;
        for (auto v : valid) n += v ? 1 : 0;
        return n;
    }

    friend bool operator==(const MaskedField&, const MaskedField&) = default;
};

struct DepthTag {};
struct DisparityTag {};

/// Depth in scene units; valid pixels are finite and > 0.
using DepthMap = MaskedField<DepthTag>;
/// Inverse depth; valid pixels are finite and >= 0.
using DisparityMap = MaskedField<DisparityTag>;

template <class A, class B>
bool same_size(const A& a, const B& b) {
    return a.width == b.width && a.height == b.height;
}

}  // namespace depthcur
