#include "depthcur/losses/gradcheck.hpp"

#include "depthcur/error.hpp"
#include "depthcur/losses/depth_losses.hpp"
#include "depthcur/losses/reward.hpp"
#include "depthcur/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace depthcur {

GradcheckReport gradcheck(const ScalarFunction& f, std::span<const double> x,
                          std::span<const double> analytic, double step,
                          std::span<const std::uint8_t> probe) {
    if (analytic.size() != x.size()) throw DimensionError("gradcheck: gradient size mismatch");
    if (!probe.empty() && probe.size() != x.size()) throw DimensionError("gradcheck: probe mask size mismatch");
    std::vector<double> work(x.begin(), x.end());
    GradcheckReport rep;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!probe.empty() && !probe[i]) continue;
        work[i] = x[i] + step;
        const double up = f(work);
        work[i] = x[i] - step;
        const double down = f(work);
        work[i] = x[i];
        const double numeric = (up - down) / (2.0 * step);
        const double err = std::abs(analytic[i] - numeric) / std::max(std::abs(numeric), 1e-8);
        if (err > rep.max_rel_error || rep.probed == 0) {
            rep.max_rel_error = err;
            rep.worst_index = i;
        }
        ++rep.probed;
    }
    return rep;
}

std::string_view to_string(GradOp op) {
    switch (op) {
        case GradOp::Ssi: return "ssi";
        case GradOp::Gm: return "gm";
        case GradOp::Cosine: return "cosine";
        case GradOp::Aesthetic: return "aesthetic";
    }
    return "?";
}

GradOp grad_op_from_string(std::string_view name) {
    for (GradOp op : {GradOp::Ssi, GradOp::Gm, GradOp::Cosine, GradOp::Aesthetic}) {
        if (to_string(op) == name) return op;
    }
    throw ArgumentError("unknown gradcheck op '" + std::string(name) + "'");
}

double gradcheck_tolerance(GradOp op) {
    return (op == GradOp::Ssi || op == GradOp::Gm) ? 1e-4 : 1e-5;
}

namespace {

constexpr int kMaxResample = 10000;

DisparityMap random_disparity(Rng& rng, int w, int h, double lo, double hi) {
    DisparityMap d(w, h);
    for (auto& v : d.values) v = lo + (hi - lo) * uniform_unit(rng);
    return d;
}

template <class Field>
Field with_values(const Field& base, std::span<const double> values) {
    Field f = base;
    f.values.assign(values.begin(), values.end());
    return f;
}

// Gap between the last dropped and first kept squared residual.
double trim_margin(const DisparityMap& pred, const DisparityMap& gt, double trim) {
    const Alignment a = align_lsq(pred, gt);
    std::vector<double> r2;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!a.joint[i]) continue;
        const double r = a.scale * pred.values[i] + a.shift - gt.values[i];
        r2.push_back(r * r);
    }
    std::sort(r2.begin(), r2.end(), std::greater<>());
    const std::size_t drop = trimmed_count(r2.size(), trim);
    if (drop == 0 || drop >= r2.size()) return std::numeric_limits<double>::infinity();
    return r2[drop - 1] - r2[drop];
}

GradcheckReport probe_ssi(Rng& rng, double step) {
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
        const DisparityMap gt = random_disparity(rng, 12, 12, 0.5, 2.0);
        DisparityMap pred = gt;
        for (auto& v : pred.values) v = 0.8 * v + 0.3 + 0.4 * (uniform_unit(rng) - 0.5);
        // A step moves each squared residual by at most ~2|r|(|s|+1)h.
        if (trim_margin(pred, gt, 0.10) < 10.0 * step) continue;
        const LossResult base = loss_ssi(pred, gt);
        return gradcheck([&](std::span<const double> x) { return loss_ssi(with_values(pred, x), gt).value; },
                         pred.values, base.grad, step, base.active);
    }
    throw DegenerateError("gradcheck: could not draw a smooth loss_ssi probe");
}

GradcheckReport probe_gm(Rng& rng, double step) {
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
        const DisparityMap gt = random_disparity(rng, 16, 16, 0.5, 2.0);
        DisparityMap pred = gt;
        for (auto& v : pred.values) v = 1.5 * v - 0.2 + 0.5 * (uniform_unit(rng) - 0.5);
        // A step moves any residual difference by about |s| * step.
        if (gm_kink_margin(pred, gt) < 3.0 * step) continue;
        const LossResult base = loss_gm(pred, gt);
        return gradcheck([&](std::span<const double> x) { return loss_gm(with_values(pred, x), gt).value; },
                         pred.values, base.grad, step);
    }
    throw DegenerateError("gradcheck: could not draw a smooth loss_gm probe");
}

GradcheckReport probe_cosine(Rng& rng, double step) {
    DepthMap src(8, 8), gen(8, 8);
    for (auto& v : src.values) v = 1.0 + 9.0 * uniform_unit(rng);
    for (std::size_t i = 0; i < gen.size(); ++i) gen.values[i] = src.values[i] * (0.5 + uniform_unit(rng));
    const LossResult base = cosine_depth_loss(gen, src);
    return gradcheck([&](std::span<const double> x) { return cosine_depth_loss(with_values(gen, x), src).value; },
                     gen.values, base.grad, step);
}

MlpWeights random_mlp(Rng& rng, const std::vector<int>& dims) {
    MlpWeights w;
    w.dims = dims;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        MlpLayer l;
        l.in = dims[k];
        l.out = dims[k + 1];
        const double s = 1.0 / std::sqrt(static_cast<double>(l.in));
        l.weight.resize(static_cast<std::size_t>(l.in) * l.out);
        for (auto& v : l.weight) v = s * (2.0 * uniform_unit(rng) - 1.0);
        l.bias.resize(static_cast<std::size_t>(l.out));
        for (auto& v : l.bias) v = 0.1 * (2.0 * uniform_unit(rng) - 1.0);
        w.layers.push_back(std::move(l));
    }
    return w;
}

// Smallest |pre-activation| over hidden units.
double relu_margin(const Embedding& e, const MlpWeights& w) {
    double norm = 0.0;
    for (double v : e.values) norm += v * v;
    norm = std::sqrt(norm);
    std::vector<double> x(e.values.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = e.values[i] / norm;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < w.layers.size(); ++k) {
        const auto& l = w.layers[k];
        std::vector<double> z(static_cast<std::size_t>(l.out));
        for (int o = 0; o < l.out; ++o) {
            double acc = l.bias[static_cast<std::size_t>(o)];
            for (int i = 0; i < l.in; ++i) acc += l.weight[static_cast<std::size_t>(o) * l.in + i] * x[static_cast<std::size_t>(i)];
            margin = std::min(margin, std::abs(acc));
            z[static_cast<std::size_t>(o)] = std::max(acc, 0.0);
        }
        x = std::move(z);
    }
    return margin;
}

GradcheckReport probe_aesthetic(Rng& rng, double step) {
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
        const MlpWeights w = random_mlp(rng, {16, 12, 8, 1});
        Embedding e;
        e.values.resize(16);
        for (auto& v : e.values) v = 0.2 + uniform_unit(rng);
        if (relu_margin(e, w) < 1e-2) continue;
        const AestheticScore base = aesthetic_score(e, w);
        return gradcheck(
            [&](std::span<const double> x) {
                return aesthetic_score(Embedding{std::vector<double>(x.begin(), x.end())}, w).score;
            },
            e.values, base.grad, step);
    }
    throw DegenerateError("gradcheck: could not draw a smooth aesthetic probe");
}

}  // namespace

GradcheckReport gradcheck_random_probes(GradOp op, std::uint64_t seed, int probes, double step) {
    Rng rng(seed);
    GradcheckReport worst;
    for (int p = 0; p < probes; ++p) {
        GradcheckReport r;
        switch (op) {
            case GradOp::Ssi: r = probe_ssi(rng, step); break;
            case GradOp::Gm: r = probe_gm(rng, step); break;
            case GradOp::Cosine: r = probe_cosine(rng, step); break;
            case GradOp::Aesthetic: r = probe_aesthetic(rng, step); break;
        }
        if (p == 0 || r.max_rel_error > worst.max_rel_error) {
            worst.max_rel_error = r.max_rel_error;
            worst.worst_index = r.worst_index;
        }
        worst.probed += r.probed;
    }
    return worst;
}

}  // namespace depthcur
