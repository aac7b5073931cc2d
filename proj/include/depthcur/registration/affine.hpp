#pragma once

#include "depthcur/random.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace depthcur {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Row-major 2x3 matrix [a b c; d e f] mapping (x, y) to (ax+by+c, dx+ey+f).
struct AffineTransform {
    std::array<double, 6> m{1.0, 0.0, 0.0, 0.0, 1.0, 0.0};

    static AffineTransform identity() { return {}; }
    static AffineTransform translation(double tx, double ty) {
        return {{1.0, 0.0, tx, 0.0, 1.0, ty}};
    }

    Point2 apply(Point2 p) const {
        return {m[0] * p.x + m[1] * p.y + m[2], m[3] * p.x + m[4] * p.y + m[5]};
    }
    double det() const { return m[0] * m[4] - m[1] * m[3]; }
    bool invertible() const;
    /// Throws DegenerateError when |det| <= 1e-12.
    AffineTransform inverse() const;
};

struct RansacParams {
    int iterations = 1000;
    double inlier_px = 3.0;
};

struct RansacResult {
    AffineTransform transform;
    std::vector<std::uint8_t> inliers;
    int inlier_count = 0;
};

/// Least-squares affine fit mapping `src` onto `dst`. Needs >= 3
/// non-collinear pairs; throws DegenerateError otherwise.
AffineTransform fit_affine_lsq(std::span<const Point2> src, std::span<const Point2> dst);

/// Minimal 3-pair hypotheses scored by reprojection error < inlier_px, then a
/// least-squares refit on the best consensus set. Draws only from `rng`.
RansacResult estimate_affine_ransac(std::span<const Point2> src, std::span<const Point2> dst,
                                    const RansacParams& params, Rng& rng);

}  // namespace depthcur
