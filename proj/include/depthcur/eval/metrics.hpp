#pragma once

#include "depthcur/core/raster.hpp"

#include <optional>
#include <string>

namespace depthcur {

struct EvalConfig {
    double delta_threshold = 1.25;
    double disparity_floor = 1e-6;
    std::optional<double> max_depth;  // pixels with gt beyond this are ignored

    void validate() const;
};

struct SampleMetrics {
    std::string id;
    double absrel = 0.0;
    double delta1 = 0.0;
    double rmse = 0.0;
    std::size_t valid_pixels = 0;
};

// Depth-space metrics over pixels valid in both maps with gt > 0. Each throws
// DegenerateError when that set is empty.
double absrel(const DepthMap& pred, const DepthMap& gt);
double delta1(const DepthMap& pred, const DepthMap& gt, double threshold = 1.25);
double rmse(const DepthMap& pred, const DepthMap& gt);

/// Aligns `pred_disp` to 1/gt by least squares in disparity space, floors the
/// aligned disparity at cfg.disparity_floor, inverts to depth and scores it.
SampleMetrics evaluate_sample(const DisparityMap& pred_disp, const DepthMap& gt_depth,
                              const EvalConfig& cfg = {}, std::string id = {});

}  // namespace depthcur
