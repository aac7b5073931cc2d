#pragma once

#include "depthcur/core/raster.hpp"
#include "depthcur/losses/alignment.hpp"

#include <cstdint>
#include <vector>

namespace depthcur {

struct LossResult {
    double value = 0.0;
    int width = 0;
    int height = 0;
    std::vector<double> grad;            // d value / d prediction, per pixel
    std::vector<std::uint8_t> active;    // pixels the loss actually supervises
};

struct DepthLossConfig {
    double ssi_weight = 1.0;
    double gm_weight = 4.0;
    double trim_fraction = 0.10;
    int gm_scales = 4;
};

/// Number of pixels loss_ssi discards out of `valid`: ceil(fraction * valid).
std::size_t trimmed_count(std::size_t valid, double fraction);

/// Scale-and-shift-invariant MSE on disparity with outlier trimming.
///
/// (s, t) is fit on every jointly valid pixel. The ceil(trim * N) pixels with
/// the largest squared residual are dropped (ties: lower pixel index dropped
/// first) and the value is the mean squared residual over the rest. The
/// gradient is the exact partial derivative at kept pixels, including the
/// path through (s, t); trimmed and invalid pixels carry zero gradient.
LossResult loss_ssi(const DisparityMap& pred, const DisparityMap& gt, double trim = 0.10);
LossResult loss_ssi(const DisparityMap& pred, const DisparityMap& gt, const Alignment& align, double trim);

/// Multi-scale gradient matching on the aligned residual.
///
/// R = s*pred + t - gt; each coarser level is a 2x2 mean of the previous one
/// (valid only where all four inputs are). Per level the L1 norm of forward
/// differences between valid neighbours is averaged over the number of such
/// pairs; the levels are averaged with equal weight. sign(0) = 0.
LossResult loss_gm(const DisparityMap& pred, const DisparityMap& gt, int scales = 4);
LossResult loss_gm(const DisparityMap& pred, const DisparityMap& gt, const Alignment& align, int scales);

/// ssi_weight * L_ssi + gm_weight * L_gm, sharing one alignment.
LossResult loss_depth_total(const DisparityMap& pred, const DisparityMap& gt,
                            const DepthLossConfig& cfg = {});

/// 1 - cos(u, v) over jointly valid pixels, gradient w.r.t. d_gen.
LossResult cosine_depth_loss(const DepthMap& d_gen, const DepthMap& d_src);

/// Smallest |forward difference| of the residual pyramid used by loss_gm.
/// Finite differences of loss_gm are only meaningful where this exceeds the
/// probe step.
double gm_kink_margin(const DisparityMap& pred, const DisparityMap& gt, int scales = 4);

}  // namespace depthcur
