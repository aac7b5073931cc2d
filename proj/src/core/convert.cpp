#include "depthcur/core/convert.hpp"

#include "depthcur/error.hpp"

#include <algorithm>
#include <cmath>

namespace depthcur {

DisparityMap depth_to_disparity(const DepthMap& depth) {
    DisparityMap out;
    out.width = depth.width;
    out.height = depth.height;
    out.values.assign(depth.size(), 0.0);
    out.valid.assign(depth.size(), 0);
    for (std::size_t i = 0; i < depth.size(); ++i) {
        const double d = depth.values[i];
        if (depth.is_valid(i) && std::isfinite(d) && d > 0.0) {
            out.values[i] = 1.0 / d;
            out.valid[i] = 1;
        }
    }
    return out;
}

DepthMap disparity_to_depth(const DisparityMap& disparity) {
    DepthMap out;
    out.width = disparity.width;
    out.height = disparity.height;
    out.values.assign(disparity.size(), 0.0);
    out.valid.assign(disparity.size(), 0);
    for (std::size_t i = 0; i < disparity.size(); ++i) {
        const double v = disparity.values[i];
        if (disparity.is_valid(i) && std::isfinite(v) && v > 0.0) {
            out.values[i] = 1.0 / v;
            out.valid[i] = 1;
        }
    }
    return out;
}

GrayImage rgb_to_luma(const RgbImage& image) {
    GrayImage out(image.width, image.height);
    const std::size_t n = out.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = &image.data[i * 3];
        out.data[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
    return out;
}

namespace {

struct Tap {
    int lo;
    int hi;
    double frac;  // weight of `hi`
};

std::vector<Tap> make_taps(int src, int dst) {
    std::vector<Tap> taps(static_cast<std::size_t>(dst));
    const double scale = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
        double s = (i + 0.5) * scale - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(src - 1));
        const int lo = static_cast<int>(std::floor(s));
        const int hi = std::min(lo + 1, src - 1);
        taps[static_cast<std::size_t>(i)] = {lo, hi, s - lo};
    }
    return taps;
}

void check_target(int width, int height) {
    if (width < 1 || height < 1) throw ArgumentError("resize target dimensions must be >= 1");
}

// Interpolates channel c of a row-major, `channels`-interleaved source.
template <class Sample>
void resample(int sw, int sh, int dw, int dh, int channels, Sample&& sample) {
    const auto tx = make_taps(sw, dw);
    const auto ty = make_taps(sh, dh);
    for (int y = 0; y < dh; ++y) {
        const Tap& vy = ty[static_cast<std::size_t>(y)];
        for (int x = 0; x < dw; ++x) {
            const Tap& vx = tx[static_cast<std::size_t>(x)];
            for (int c = 0; c < channels; ++c) sample(x, y, c, vx, vy);
        }
    }
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& image, int width, int height) {
    check_target(width, height);
    if (width == image.width && height == image.height) return image;
    GrayImage out(width, height);
    resample(image.width, image.height, width, height, 1,
             [&](int x, int y, int, const Tap& vx, const Tap& vy) {
                 const double top = image.at(vx.lo, vy.lo) * (1.0 - vx.frac) +
                                    image.at(vx.hi, vy.lo) * vx.frac;
                 const double bot = image.at(vx.lo, vy.hi) * (1.0 - vx.frac) +
                                    image.at(vx.hi, vy.hi) * vx.frac;
                 out.at(x, y) = top * (1.0 - vy.frac) + bot * vy.frac;
             });
    return out;
}

RgbImage resize_bilinear(const RgbImage& image, int width, int height) {
    check_target(width, height);
    if (width == image.width && height == image.height) return image;
    RgbImage out(width, height);
    resample(image.width, image.height, width, height, 3,
             [&](int x, int y, int c, const Tap& vx, const Tap& vy) {
                 const double top = image.at(vx.lo, vy.lo, c) * (1.0 - vx.frac) +
                                    image.at(vx.hi, vy.lo, c) * vx.frac;
                 const double bot = image.at(vx.lo, vy.hi, c) * (1.0 - vx.frac) +
                                    image.at(vx.hi, vy.hi, c) * vx.frac;
                 const double v = top * (1.0 - vy.frac) + bot * vy.frac;
                 out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
             });
    return out;
}

}  // namespace depthcur
