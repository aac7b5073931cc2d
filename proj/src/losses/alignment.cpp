#include "depthcur/losses/alignment.hpp"

#include "depthcur/error.hpp"

#include <cmath>

namespace depthcur {

Alignment align_lsq(const DisparityMap& pred, const DisparityMap& gt, const std::optional<BinaryMask>& mask) {
    if (!same_size(pred, gt)) throw DimensionError("align_lsq: prediction and target differ in size");
    if (mask && !same_size(*mask, pred)) throw DimensionError("align_lsq: mask differs in size");

    Alignment a;
    a.joint.assign(pred.size(), 0);
    double sp = 0.0, sg = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!pred.is_valid(i) || !gt.is_valid(i) || (mask && !mask->bits[i])) continue;
        a.joint[i] = 1;
        ++a.count;
        sp += pred.values[i];
        sg += gt.values[i];
    }
    if (a.count < 2) throw DegenerateError("align_lsq: fewer than two jointly valid pixels");
    const double n = static_cast<double>(a.count);
    a.mean_pred = sp / n;
    a.mean_gt = sg / n;

    double var = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!a.joint[i]) continue;
        const double dp = pred.values[i] - a.mean_pred;
        var += dp * dp;
        cov += dp * (gt.values[i] - a.mean_gt);
    }
    if (!(var > 1e-12 * n * a.mean_pred * a.mean_pred) || var == 0.0) {
        throw DegenerateError("align_lsq: prediction is constant over the valid set");
    }
    a.var_pred = var;
    a.scale = cov / var;
    a.shift = a.mean_gt - a.scale * a.mean_pred;
    return a;
}

std::vector<double> backprop_alignment(const Alignment& a, const DisparityMap& pred,
                                       const DisparityMap& gt, std::span<const double> dl_dr) {
    // ds/dp_j = (g_j - mg)/V - 2 s (p_j - mp)/V ;  dt/dp_j = -mp ds/dp_j - s/N
    double sum_g = 0.0, sum_gp = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!a.joint[i]) continue;
        sum_g += dl_dr[i];
        sum_gp += dl_dr[i] * pred.values[i];
    }
    const double n = static_cast<double>(a.count);
    std::vector<double> grad(pred.size(), 0.0);
    for (std::size_t j = 0; j < pred.size(); ++j) {
        if (!a.joint[j]) continue;
        const double ds = (gt.values[j] - a.mean_gt) / a.var_pred -
                          2.0 * a.scale * (pred.values[j] - a.mean_pred) / a.var_pred;
        const double dt = -a.mean_pred * ds - a.scale / n;
        grad[j] = a.scale * dl_dr[j] + sum_gp * ds + sum_g * dt;
    }
    return grad;
}

}  // namespace depthcur
