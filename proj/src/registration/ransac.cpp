#include "depthcur/registration/affine.hpp"

#include "depthcur/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace depthcur {

namespace {

constexpr double kMinDet = 1e-12;

bool collinear(Point2 p0, Point2 p1, Point2 p2) {
    const double ux = p1.x - p0.x, uy = p1.y - p0.y;
    const double vx = p2.x - p0.x, vy = p2.y - p0.y;
    const double cross = ux * vy - uy * vx;
    const double scale = std::hypot(ux, uy) * std::hypot(vx, vy);
    return scale == 0.0 || std::abs(cross) <= 1e-9 * scale;
}

double reprojection_error(const AffineTransform& t, Point2 a, Point2 b) {
    const Point2 p = t.apply(a);
    return std::hypot(p.x - b.x, p.y - b.y);
}

}  // namespace

bool AffineTransform::invertible() const {
    for (double v : m) {
        if (!std::isfinite(v)) return false;
    }
    return std::abs(det()) > kMinDet;
}

AffineTransform AffineTransform::inverse() const {
    if (!invertible()) throw DegenerateError("affine transform is singular");
    const double d = det();
    const double ia = m[4] / d, ib = -m[1] / d;
    const double id = -m[3] / d, ie = m[0] / d;
    return {{ia, ib, -(ia * m[2] + ib * m[5]), id, ie, -(id * m[2] + ie * m[5])}};
}

AffineTransform fit_affine_lsq(std::span<const Point2> src, std::span<const Point2> dst) {
    if (src.size() != dst.size()) throw DimensionError("fit_affine_lsq: point count mismatch");
    const auto n = static_cast<Eigen::Index>(src.size());
    if (n < 3) throw DegenerateError("fit_affine_lsq: need at least 3 pairs");

    // Center the source points so the design matrix is well conditioned.
    double cx = 0.0, cy = 0.0;
    for (const auto& p : src) {
        cx += p.x;
        cy += p.y;
    }
    cx /= static_cast<double>(n);
    cy /= static_cast<double>(n);

    Eigen::MatrixXd design(n, 3);
    Eigen::MatrixXd rhs(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = src[static_cast<std::size_t>(i)].x - cx;
        design(i, 1) = src[static_cast<std::size_t>(i)].y - cy;
        design(i, 2) = 1.0;
        rhs(i, 0) = dst[static_cast<std::size_t>(i)].x;
        rhs(i, 1) = dst[static_cast<std::size_t>(i)].y;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) throw DegenerateError("fit_affine_lsq: points are collinear");
    const Eigen::MatrixXd sol = qr.solve(rhs);

    AffineTransform t;
    t.m = {sol(0, 0), sol(1, 0), sol(2, 0) - sol(0, 0) * cx - sol(1, 0) * cy,
           sol(0, 1), sol(1, 1), sol(2, 1) - sol(0, 1) * cx - sol(1, 1) * cy};
    if (!t.invertible()) throw DegenerateError("fit_affine_lsq: fitted transform is singular");
    return t;
}

RansacResult estimate_affine_ransac(std::span<const Point2> src, std::span<const Point2> dst,
                                    const RansacParams& params, Rng& rng) {
    if (src.size() != dst.size()) throw DimensionError("estimate_affine_ransac: point count mismatch");
    const std::size_t n = src.size();
    if (n < 3) throw DegenerateError("estimate_affine_ransac: need at least 3 pairs");

    std::vector<std::uint8_t> best, flags(n);
    int best_count = 0;
    for (int it = 0; it < params.iterations; ++it) {
        const std::size_t i0 = uniform_index(rng, n);
        std::size_t i1 = uniform_index(rng, n - 1);
        if (i1 >= i0) ++i1;
        std::size_t i2 = uniform_index(rng, n - 2);
        for (std::size_t used : {std::min(i0, i1), std::max(i0, i1)}) {
            if (i2 >= used) ++i2;
        }
        if (collinear(src[i0], src[i1], src[i2]) || collinear(dst[i0], dst[i1], dst[i2])) continue;

        const Point2 s[3] = {src[i0], src[i1], src[i2]};
        const Point2 d[3] = {dst[i0], dst[i1], dst[i2]};
        AffineTransform hyp;
        try {
            hyp = fit_affine_lsq(s, d);
        } catch (const DegenerateError&) {
            continue;
        }
        int count = 0;
        for (std::size_t k = 0; k < n; ++k) {
            flags[k] = reprojection_error(hyp, src[k], dst[k]) < params.inlier_px ? 1 : 0;
            count += flags[k];
        }
        if (count > best_count) {
            best_count = count;
            best = flags;
        }
    }
    if (best_count < 3) throw DegenerateError("estimate_affine_ransac: every hypothesis was degenerate");

    std::vector<Point2> in_src, in_dst;
    in_src.reserve(static_cast<std::size_t>(best_count));
    in_dst.reserve(static_cast<std::size_t>(best_count));
    for (std::size_t k = 0; k < n; ++k) {
        if (best[k]) {
            in_src.push_back(src[k]);
            in_dst.push_back(dst[k]);
        }
    }
    RansacResult out;
    out.transform = fit_affine_lsq(in_src, in_dst);
    out.inliers = std::move(best);
    out.inlier_count = best_count;
    return out;
}

}  // namespace depthcur
