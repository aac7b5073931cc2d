#include "depthcur/fusion/morphology.hpp"

#include "depthcur/error.hpp"

#include <tuple>

namespace depthcur {

namespace {

void check_kernel(int kernel) {
    if (kernel < 1 || kernel % 2 == 0) throw ArgumentError("morphology kernel must be odd and >= 1");
}

// Separable min (erode) / max (dilate) over a kernel x kernel square.
BinaryMask square_filter(const BinaryMask& m, int kernel, bool is_erode) {
    check_kernel(kernel);
    const int r = kernel / 2;
    const std::uint8_t border = is_erode ? 1 : 0;
    const int w = m.width;
    const int h = m.height;
    auto pass = [&](const BinaryMask& src, bool horizontal) {
        BinaryMask out(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                std::uint8_t acc = is_erode ? 1 : 0;
                for (int k = -r; k <= r; ++k) {
                    const int sx = horizontal ? x + k : x;
                    const int sy = horizontal ? y : y + k;
                    const std::uint8_t v = (sx < 0 || sy < 0 || sx >= w || sy >= h) ? border : src.at(sx, sy);
                    if (is_erode && !v) {
                        acc = 0;
                        break;
                    }
                    if (!is_erode && v) {
                        acc = 1;
                        break;
                    }
                }
                out.at(x, y) = acc;
            }
        }
        return out;
    };
    return pass(pass(m, true), false);
}

}  // namespace

BinaryMask fuse_or(const BinaryMask& a, const BinaryMask& b) {
    if (!same_size(a, b)) throw DimensionError("fuse_or: mask dimensions differ");
    BinaryMask out = a;
    for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = (a.bits[i] | b.bits[i]) ? 1 : 0;
    return out;
}

BinaryMask erode(const BinaryMask& m, int kernel) { return square_filter(m, kernel, true); }
BinaryMask dilate(const BinaryMask& m, int kernel) { return square_filter(m, kernel, false); }
BinaryMask morph_open(const BinaryMask& m, int kernel) { return dilate(erode(m, kernel), kernel); }
BinaryMask morph_close(const BinaryMask& m, int kernel) { return erode(dilate(m, kernel), kernel); }
BinaryMask morph_open_close(const BinaryMask& m, int kernel) {
    return morph_close(morph_open(m, kernel), kernel);
}

double valid_fraction(const BinaryMask& m) {
    if (m.bits.empty()) throw ArgumentError("valid_fraction: empty mask");
    return static_cast<double>(m.count_ones()) / static_cast<double>(m.bits.size());
}

std::optional<Rect> largest_region_bbox(const BinaryMask& m) {
    const int w = m.width;
    const int h = m.height;
    std::vector<std::uint8_t> seen(m.bits.size(), 0);
    std::vector<int> stack;
    std::optional<Rect> best;
    std::size_t best_size = 0;

    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            const std::size_t start = static_cast<std::size_t>(y0) * w + x0;
            if (!m.bits[start] || seen[start]) continue;
            int min_x = x0, max_x = x0, min_y = y0, max_y = y0;
            std::size_t size = 0;
            seen[start] = 1;
            stack.assign(1, static_cast<int>(start));
            while (!stack.empty()) {
                const int idx = stack.back();
                stack.pop_back();
                ++size;
                const int x = idx % w;
                const int y = idx / w;
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
                const int nx[4] = {x - 1, x + 1, x, x};
                const int ny[4] = {y, y, y - 1, y + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
                    const std::size_t n = static_cast<std::size_t>(ny[k]) * w + nx[k];
                    if (m.bits[n] && !seen[n]) {
                        seen[n] = 1;
                        stack.push_back(static_cast<int>(n));
                    }
                }
            }
            const Rect box{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
            const bool better = size > best_size ||
                                (size == best_size && best &&
                                 std::tie(box.y, box.x) < std::tie(best->y, best->x));
            if (better) {
                best = box;
                best_size = size;
            }
        }
    }
    return best;
}

}  // namespace depthcur
