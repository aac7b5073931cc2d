#pragma once

#include "depthcur/core/raster.hpp"

#include <optional>
#include <span>

namespace depthcur {

/// Closed-form least-squares scale and shift, plus the centered moments the
/// loss gradients need.
struct Alignment {
    double scale = 1.0;
    double shift = 0.0;
    double mean_pred = 0.0;
    double mean_gt = 0.0;
    double var_pred = 0.0;  // sum of squared deviations, not divided by n
    std::size_t count = 0;
    std::vector<std::uint8_t> joint;  // pixels that entered the fit
};

/// argmin_{s,t} sum (s*pred + t - gt)^2 over pixels valid in both maps and in
/// `mask` (if given). Throws DegenerateError for fewer than two pixels or a
/// prediction that is constant over them.
Alignment align_lsq(const DisparityMap& pred, const DisparityMap& gt,
                    const std::optional<BinaryMask>& mask = std::nullopt);

/// Pulls dL/dR back to dL/dpred through R = s*pred + t - gt, including the
/// dependence of (s, t) on pred. `dl_dr` is zero outside the fit set; the
/// result is zero there too.
std::vector<double> backprop_alignment(const Alignment& a, const DisparityMap& pred,
                                       const DisparityMap& gt, std::span<const double> dl_dr);

}  // namespace depthcur
