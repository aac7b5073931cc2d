#include "depthcur/fusion/crop.hpp"

#include "depthcur/fusion/morphology.hpp"

#include <algorithm>
#include <cmath>

namespace depthcur {

std::optional<Rect> place_crop(const Rect& bbox, int width, int height, int size,
                               int jitter_x, int jitter_y) {
    if (size < 1 || width < size || height < size) return std::nullopt;
    // Doubled coordinates keep the center exact for odd and even extents.
    const int x2 = 2 * bbox.x + bbox.width;
    const int y2 = 2 * bbox.y + bbox.height;
    int x = static_cast<int>(std::floor((x2 - size) / 2.0)) + jitter_x;
    int y = static_cast<int>(std::floor((y2 - size) / 2.0)) + jitter_y;
    x = std::clamp(x, 0, width - size);
    y = std::clamp(y, 0, height - size);
    return Rect{x, y, size, size};
}

std::optional<Rect> select_crop(const BinaryMask& m, int width, int height, int size, Rng& rng) {
    if (size < 1 || width < size || height < size) return std::nullopt;
    const auto bbox = largest_region_bbox(m);
    if (!bbox) return std::nullopt;
    const int reach = size / 4;
    const int jx = static_cast<int>(uniform_int(rng, -reach, reach));
    const int jy = static_cast<int>(uniform_int(rng, -reach, reach));
    return place_crop(*bbox, width, height, size, jx, jy);
}

}  // namespace depthcur
