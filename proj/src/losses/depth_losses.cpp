#include "depthcur/losses/depth_losses.hpp"

#include "depthcur/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace depthcur {

namespace {

LossResult empty_result(int w, int h) {
    LossResult r;
    r.width = w;
    r.height = h;
    r.grad.assign(static_cast<std::size_t>(w) * h, 0.0);
    r.active.assign(static_cast<std::size_t>(w) * h, 0);
    return r;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct Level {
    int width = 0;
    int height = 0;
    std::vector<double> r;
    std::vector<std::uint8_t> valid;
};

std::vector<Level> residual_pyramid(const DisparityMap& pred, const DisparityMap& gt,
                                    const Alignment& a, int scales) {
    std::vector<Level> levels;
    Level base{pred.width, pred.height, std::vector<double>(pred.size(), 0.0), a.joint};
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (a.joint[i]) base.r[i] = a.scale * pred.values[i] + a.shift - gt.values[i];
    }
    levels.push_back(std::move(base));
    for (int k = 1; k < scales; ++k) {
        const Level& f = levels.back();
        const int w = f.width / 2;
        const int h = f.height / 2;
        if (w < 1 || h < 1) break;
        Level c{w, h, std::vector<double>(static_cast<std::size_t>(w) * h, 0.0),
                std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)};
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t i00 = static_cast<std::size_t>(2 * y) * f.width + 2 * x;
                const std::size_t i01 = i00 + 1;
                const std::size_t i10 = i00 + static_cast<std::size_t>(f.width);
                const std::size_t i11 = i10 + 1;
                if (f.valid[i00] && f.valid[i01] && f.valid[i10] && f.valid[i11]) {
                    const std::size_t o = static_cast<std::size_t>(y) * w + x;
                    c.r[o] = 0.25 * (f.r[i00] + f.r[i01] + f.r[i10] + f.r[i11]);
                    c.valid[o] = 1;
                }
            }
        }
        levels.push_back(std::move(c));
    }
    return levels;
}

// Visits every forward difference between two valid neighbours: fn(i, j)
// with j the right or lower neighbour of i.
template <class Fn>
void for_each_pair(const Level& l, Fn&& fn) {
    for (int y = 0; y < l.height; ++y) {
        for (int x = 0; x < l.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * l.width + x;
            if (!l.valid[i]) continue;
            if (x + 1 < l.width && l.valid[i + 1]) fn(i, i + 1);
            if (y + 1 < l.height && l.valid[i + static_cast<std::size_t>(l.width)]) {
                fn(i, i + static_cast<std::size_t>(l.width));
            }
        }
    }
}

}  // namespace

std::size_t trimmed_count(std::size_t valid, double fraction) {
    // Guard against 0.1 * N landing a hair above an integer.
    const double raw = fraction * static_cast<double>(valid);
    const double nearest = std::round(raw);
    const double k = std::abs(raw - nearest) < 1e-9 ? nearest : std::ceil(raw);
    return std::min(valid, static_cast<std::size_t>(k));
}

LossResult loss_ssi(const DisparityMap& pred, const DisparityMap& gt, double trim) {
    return loss_ssi(pred, gt, align_lsq(pred, gt), trim);
}

LossResult loss_ssi(const DisparityMap& pred, const DisparityMap& gt, const Alignment& a, double trim) {
    if (trim < 0.0 || trim >= 1.0) throw ArgumentError("loss_ssi: trim must be in [0, 1)");
    LossResult out = empty_result(pred.width, pred.height);

    std::vector<double> r(pred.size(), 0.0);
    std::vector<std::size_t> order;
    order.reserve(a.count);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!a.joint[i]) continue;
        r[i] = a.scale * pred.values[i] + a.shift - gt.values[i];
        order.push_back(i);
    }
    const std::size_t drop = trimmed_count(order.size(), trim);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t rr) { return r[l] * r[l] > r[rr] * r[rr]; });

    const std::size_t kept = order.size() - drop;
    double sum = 0.0;
    for (std::size_t k = drop; k < order.size(); ++k) {
        const std::size_t i = order[k];
        out.active[i] = 1;
        sum += r[i] * r[i];
    }
    out.value = sum / static_cast<double>(kept);

    std::vector<double> dl_dr(pred.size(), 0.0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (out.active[i]) dl_dr[i] = 2.0 * r[i] / static_cast<double>(kept);
    }
    out.grad = backprop_alignment(a, pred, gt, dl_dr);
    // Trimmed pixels are excluded from supervision entirely.
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!out.active[i]) out.grad[i] = 0.0;
    }
    return out;
}

LossResult loss_gm(const DisparityMap& pred, const DisparityMap& gt, int scales) {
    return loss_gm(pred, gt, align_lsq(pred, gt), scales);
}

LossResult loss_gm(const DisparityMap& pred, const DisparityMap& gt, const Alignment& a, int scales) {
    if (scales < 1) throw ArgumentError("loss_gm: need at least one scale");
    LossResult out = empty_result(pred.width, pred.height);
    out.active = a.joint;
    const auto levels = residual_pyramid(pred, gt, a, scales);

    // Gradient w.r.t. each level's residual, then pushed down the pyramid.
    std::vector<std::vector<double>> dl(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const Level& l = levels[k];
        dl[k].assign(l.r.size(), 0.0);
        std::size_t pairs = 0;
        double sum = 0.0;
        for_each_pair(l, [&](std::size_t i, std::size_t j) {
            ++pairs;
            sum += std::abs(l.r[j] - l.r[i]);
        });
        if (pairs == 0) continue;
        const double inv = 1.0 / (static_cast<double>(pairs) * scales);
        out.value += sum * inv;
        for_each_pair(l, [&](std::size_t i, std::size_t j) {
            const double sg = sign(l.r[j] - l.r[i]) * inv;
            dl[k][j] += sg;
            dl[k][i] -= sg;
        });
    }
    for (std::size_t k = levels.size() - 1; k > 0; --k) {
        const Level& c = levels[k];
        const Level& f = levels[k - 1];
        for (int y = 0; y < c.height; ++y) {
            for (int x = 0; x < c.width; ++x) {
                const std::size_t o = static_cast<std::size_t>(y) * c.width + x;
                if (!c.valid[o]) continue;
                const double g = 0.25 * dl[k][o];
                const std::size_t i00 = static_cast<std::size_t>(2 * y) * f.width + 2 * x;
                const std::size_t i10 = i00 + static_cast<std::size_t>(f.width);
                dl[k - 1][i00] += g;
                dl[k - 1][i00 + 1] += g;
                dl[k - 1][i10] += g;
                dl[k - 1][i10 + 1] += g;
            }
        }
    }
    out.grad = backprop_alignment(a, pred, gt, dl[0]);
    return out;
}

LossResult loss_depth_total(const DisparityMap& pred, const DisparityMap& gt, const DepthLossConfig& cfg) {
    const Alignment a = align_lsq(pred, gt);
    const LossResult ssi = loss_ssi(pred, gt, a, cfg.trim_fraction);
    const LossResult gm = loss_gm(pred, gt, a, cfg.gm_scales);
    LossResult out = empty_result(pred.width, pred.height);
    out.value = cfg.ssi_weight * ssi.value + cfg.gm_weight * gm.value;
    for (std::size_t i = 0; i < out.grad.size(); ++i) {
        out.grad[i] = cfg.ssi_weight * ssi.grad[i] + cfg.gm_weight * gm.grad[i];
        out.active[i] = a.joint[i];
    }
    return out;
}

LossResult cosine_depth_loss(const DepthMap& d_gen, const DepthMap& d_src) {
    if (!same_size(d_gen, d_src)) throw DimensionError("cosine_depth_loss: maps differ in size");
    LossResult out = empty_result(d_gen.width, d_gen.height);
    double uv = 0.0, uu = 0.0, vv = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < d_gen.size(); ++i) {
        if (!d_gen.is_valid(i) || !d_src.is_valid(i)) continue;
        out.active[i] = 1;
        ++n;
        uv += d_gen.values[i] * d_src.values[i];
        uu += d_gen.values[i] * d_gen.values[i];
        vv += d_src.values[i] * d_src.values[i];
    }
    if (n == 0) throw DegenerateError("cosine_depth_loss: no jointly valid pixels");
    if (uu == 0.0 || vv == 0.0) throw DegenerateError("cosine_depth_loss: zero-norm depth vector");
    const double nu = std::sqrt(uu);
    const double nv = std::sqrt(vv);
    out.value = 1.0 - uv / (nu * nv);
    for (std::size_t i = 0; i < d_gen.size(); ++i) {
        if (!out.active[i]) continue;
        out.grad[i] = -(d_src.values[i] / (nu * nv) - uv * d_gen.values[i] / (uu * nu * nv));
    }
    return out;
}

double gm_kink_margin(const DisparityMap& pred, const DisparityMap& gt, int scales) {
    const auto levels = residual_pyramid(pred, gt, align_lsq(pred, gt), scales);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& l : levels) {
        for_each_pair(l, [&](std::size_t i, std::size_t j) { margin = std::min(margin, std::abs(l.r[j] - l.r[i])); });
    }
    return margin;
}

}  // namespace depthcur
