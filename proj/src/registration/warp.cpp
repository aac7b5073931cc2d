#include "depthcur/registration/warp.hpp"

#include "depthcur/error.hpp"

#include <algorithm>
#include <cmath>

namespace depthcur {

namespace {

constexpr double kEdgeSlack = 1e-9;

struct Sample {
    int x0, y0, x1, y1;
    double fx, fy;
};

template <class Fn>
BinaryMask inverse_map(int src_w, int src_h, const AffineTransform& t, int out_w, int out_h, Fn&& write) {
    if (out_w < 1 || out_h < 1) throw ArgumentError("warp_affine: output dimensions must be >= 1");
    const AffineTransform inv = t.inverse();
    BinaryMask coverage(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            const Point2 s = inv.apply({static_cast<double>(x), static_cast<double>(y)});
            if (s.x < -kEdgeSlack || s.y < -kEdgeSlack || s.x > src_w - 1 + kEdgeSlack ||
                s.y > src_h - 1 + kEdgeSlack) {
                continue;
            }
            const double sx = std::clamp(s.x, 0.0, static_cast<double>(src_w - 1));
            const double sy = std::clamp(s.y, 0.0, static_cast<double>(src_h - 1));
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            write(x, y, Sample{x0, y0, std::min(x0 + 1, src_w - 1), std::min(y0 + 1, src_h - 1), sx - x0, sy - y0});
            coverage.at(x, y) = 1;
        }
    }
    return coverage;
}

template <class Get>
double bilinear(const Sample& s, Get&& get) {
    const double top = get(s.x0, s.y0) * (1.0 - s.fx) + get(s.x1, s.y0) * s.fx;
    const double bot = get(s.x0, s.y1) * (1.0 - s.fx) + get(s.x1, s.y1) * s.fx;
    return top * (1.0 - s.fy) + bot * s.fy;
}

}  // namespace

Warped<GrayImage> warp_affine(const GrayImage& image, const AffineTransform& t, int out_w, int out_h) {
    GrayImage out(std::max(out_w, 1), std::max(out_h, 1));
    auto cov = inverse_map(image.width, image.height, t, out_w, out_h, [&](int x, int y, const Sample& s) {
        out.at(x, y) = bilinear(s, [&](int u, int v) { return image.at(u, v); });
    });
    return {std::move(out), std::move(cov)};
}

Warped<RgbImage> warp_affine(const RgbImage& image, const AffineTransform& t, int out_w, int out_h) {
    RgbImage out(std::max(out_w, 1), std::max(out_h, 1));
    auto cov = inverse_map(image.width, image.height, t, out_w, out_h, [&](int x, int y, const Sample& s) {
        for (int c = 0; c < 3; ++c) {
            const double v = bilinear(s, [&](int u, int w) { return static_cast<double>(image.at(u, w, c)); });
            out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    });
    return {std::move(out), std::move(cov)};
}

}  // namespace depthcur
