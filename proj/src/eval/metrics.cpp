#include "depthcur/eval/metrics.hpp"

#include "depthcur/core/convert.hpp"
#include "depthcur/error.hpp"
#include "depthcur/losses/alignment.hpp"

#include <algorithm>
#include <cmath>

namespace depthcur {

void EvalConfig::validate() const {
    if (!(delta_threshold > 1.0)) throw ArgumentError("delta threshold must be > 1");
    if (!(disparity_floor > 0.0)) throw ArgumentError("disparity floor must be > 0");
    if (max_depth && !(*max_depth > 0.0)) throw ArgumentError("max depth must be > 0");
}

namespace {

template <class Fn>
std::size_t for_joint(const DepthMap& pred, const DepthMap& gt, Fn&& fn) {
    if (!same_size(pred, gt)) throw DimensionError("metric operands differ in size");
    std::size_t n = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (!pred.is_valid(i) || !gt.is_valid(i) || !(gt.values[i] > 0.0)) continue;
        fn(pred.values[i], gt.values[i]);
        ++n;
    }
    if (n == 0) throw DegenerateError("no jointly valid pixels to evaluate");
    return n;
}

}  // namespace

double absrel(const DepthMap& pred, const DepthMap& gt) {
    double sum = 0.0;
    const auto n = for_joint(pred, gt, [&](double p, double g) { sum += std::abs(p - g) / g; });
    return sum / static_cast<double>(n);
}

double delta1(const DepthMap& pred, const DepthMap& gt, double threshold) {
    std::size_t hits = 0;
    const auto n = for_joint(pred, gt, [&](double p, double g) {
        if (std::max(p / g, g / p) < threshold) ++hits;
    });
    return static_cast<double>(hits) / static_cast<double>(n);
}

double rmse(const DepthMap& pred, const DepthMap& gt) {
    double sum = 0.0;
    const auto n = for_joint(pred, gt, [&](double p, double g) { sum += (p - g) * (p - g); });
    return std::sqrt(sum / static_cast<double>(n));
}

SampleMetrics evaluate_sample(const DisparityMap& pred_disp, const DepthMap& gt_depth,
                              const EvalConfig& cfg, std::string id) {
    cfg.validate();
    if (!same_size(pred_disp, gt_depth)) throw DimensionError("evaluate_sample: prediction and ground truth differ in size");
    const DisparityMap gt_disp = depth_to_disparity(gt_depth);
    const Alignment a = align_lsq(pred_disp, gt_disp);

    DepthMap pred_depth(gt_depth.width, gt_depth.height, 0.0, false);
    DepthMap gt = gt_depth;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        if (!a.joint[i]) {
            gt.valid[i] = 0;
            continue;
        }
        const double aligned = std::max(a.scale * pred_disp.values[i] + a.shift, cfg.disparity_floor);
        pred_depth.values[i] = 1.0 / aligned;
        pred_depth.valid[i] = 1;
        if (cfg.max_depth && gt.values[i] > *cfg.max_depth) gt.valid[i] = 0;
    }

    SampleMetrics m;
    m.id = std::move(id);
    m.absrel = absrel(pred_depth, gt);
    m.delta1 = delta1(pred_depth, gt, cfg.delta_threshold);
    m.rmse = rmse(pred_depth, gt);
    m.valid_pixels = gt.valid_count();
    return m;
}

}  // namespace depthcur
