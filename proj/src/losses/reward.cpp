#include "depthcur/losses/reward.hpp"

#include "depthcur/core/convert.hpp"
#include "depthcur/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace depthcur {

using nlohmann::json;

Embedding toy_embed(const RgbImage& image) {
    const int w = image.width;
    const int h = image.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    Embedding e;
    e.values.assign(kToyEmbeddingSize, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) e.values[static_cast<std::size_t>(c) * 16 + (image.data[i * 3 + c] >> 4)] += 1.0;
    }
    for (std::size_t k = 0; k < 48; ++k) e.values[k] /= static_cast<double>(n);

    const GrayImage luma = rgb_to_luma(image);
    double orient_total = 0.0;
    double sum_dx = 0.0, sum_dy = 0.0;
    std::size_t n_dx = 0, n_dy = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool has_x = x + 1 < w;
            const bool has_y = y + 1 < h;
            const double gx = has_x ? luma.at(x + 1, y) - luma.at(x, y) : 0.0;
            const double gy = has_y ? luma.at(x, y + 1) - luma.at(x, y) : 0.0;
            if (has_x) {
                sum_dx += std::abs(gx);
                ++n_dx;
            }
            if (has_y) {
                sum_dy += std::abs(gy);
                ++n_dy;
            }
            const double mag = std::hypot(gx, gy);
            if (mag == 0.0) continue;
            double theta = std::atan2(gy, gx);
            if (theta < 0.0) theta += 2.0 * std::numbers::pi;
            const int bin = std::min(7, static_cast<int>(theta / (2.0 * std::numbers::pi) * 8.0));
            e.values[48 + static_cast<std::size_t>(bin)] += mag;
            orient_total += mag;
        }
    }
    if (orient_total > 0.0) {
        for (std::size_t k = 48; k < 56; ++k) e.values[k] /= orient_total;
    }

    std::vector<double> sorted = luma.data;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : sorted) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    double hist[16] = {};
    for (double v : sorted) hist[std::clamp(static_cast<int>(v / 16.0), 0, 15)] += 1.0;
    double entropy = 0.0;
    for (double c : hist) {
        if (c == 0.0) continue;
        const double p = c / static_cast<double>(n);
        entropy -= p * std::log2(p);
    }

    e.values[56] = mean;
    e.values[57] = std::sqrt(var);
    e.values[58] = n_dx ? sum_dx / static_cast<double>(n_dx) : 0.0;
    e.values[59] = n_dy ? sum_dy / static_cast<double>(n_dy) : 0.0;
    e.values[60] = sorted.front();
    e.values[61] = sorted.back();
    e.values[62] = median;
    e.values[63] = entropy;
    return e;
}

void MlpWeights::validate() const {
    if (dims.size() < 2) throw FormatError("mlp: dims needs at least an input and an output");
    if (dims.back() != 1) throw FormatError("mlp: final output dimension must be 1");
    for (int d : dims) {
        if (d < 1) throw FormatError("mlp: dimensions must be positive");
    }
    if (layers.size() != dims.size() - 1) throw FormatError("mlp: layer count does not match dims");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto& l = layers[k];
        const std::string where = "mlp: layer " + std::to_string(k);
        if (l.in != dims[k] || l.out != dims[k + 1]) throw FormatError(where + " shape does not match dims");
        if (l.weight.size() != static_cast<std::size_t>(l.in) * l.out) throw FormatError(where + " W has wrong length");
        if (l.bias.size() != static_cast<std::size_t>(l.out)) throw FormatError(where + " b has wrong length");
        for (double v : l.weight) {
            if (!std::isfinite(v)) throw FormatError(where + " W is not finite");
        }
        for (double v : l.bias) {
            if (!std::isfinite(v)) throw FormatError(where + " b is not finite");
        }
    }
}

MlpWeights MlpWeights::from_json(const std::string& text) {
    MlpWeights w;
    try {
        const json doc = json::parse(text);
        w.dims = doc.at("dims").get<std::vector<int>>();
        const auto& layers = doc.at("layers");
        if (!layers.is_array()) throw FormatError("mlp: layers must be an array");
        for (std::size_t k = 0; k < layers.size(); ++k) {
            MlpLayer l;
            l.weight = layers[k].at("W").get<std::vector<double>>();
            l.bias = layers[k].at("b").get<std::vector<double>>();
            if (k + 1 < w.dims.size()) {
                l.in = w.dims[k];
                l.out = w.dims[k + 1];
            }
            w.layers.push_back(std::move(l));
        }
    } catch (const json::exception& ex) {
        throw FormatError(std::string("mlp: ") + ex.what());
    }
    w.validate();
    return w;
}

MlpWeights MlpWeights::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string MlpWeights::to_json() const {
    json doc;
    doc["dims"] = dims;
    doc["layers"] = json::array();
    for (const auto& l : layers) doc["layers"].push_back({{"W", l.weight}, {"b", l.bias}});
    return doc.dump();
}

AestheticScore aesthetic_score(const Embedding& e, const MlpWeights& w) {
    w.validate();
    const std::size_t d = e.values.size();
    if (static_cast<int>(d) != w.dims.front()) throw DimensionError("aesthetic_score: embedding size does not match MLP input");

    // Dividing by the max magnitude first makes the normalized vector depend
    // only on the ratios e_i / e_max, so exactly scaled inputs give identical
    // scores.
    double peak = 0.0;
    for (double v : e.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0 || !std::isfinite(peak)) throw DegenerateError("aesthetic_score: zero embedding");
    std::vector<double> u(d);
    double uu = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        u[i] = e.values[i] / peak;
        uu += u[i] * u[i];
    }
    const double nu = std::sqrt(uu);
    std::vector<double> h(d);
    for (std::size_t i = 0; i < d; ++i) h[i] = u[i] / nu;

    // Forward, keeping activations for the backward pass.
    std::vector<std::vector<double>> acts{h};
    std::vector<std::vector<double>> pre;
    for (std::size_t k = 0; k < w.layers.size(); ++k) {
        const auto& l = w.layers[k];
        const auto& x = acts.back();
        std::vector<double> z(static_cast<std::size_t>(l.out));
        for (int o = 0; o < l.out; ++o) {
            double acc = l.bias[static_cast<std::size_t>(o)];
            for (int i = 0; i < l.in; ++i) acc += l.weight[static_cast<std::size_t>(o) * l.in + i] * x[static_cast<std::size_t>(i)];
            z[static_cast<std::size_t>(o)] = acc;
        }
        pre.push_back(z);
        if (k + 1 < w.layers.size()) {
            for (auto& v : z) v = std::max(v, 0.0);
        }
        acts.push_back(std::move(z));
    }

    AestheticScore out;
    out.score = acts.back()[0];

    std::vector<double> g{1.0};
    for (std::size_t k = w.layers.size(); k-- > 0;) {
        const auto& l = w.layers[k];
        if (k + 1 < w.layers.size()) {
            for (int o = 0; o < l.out; ++o) {
                if (pre[k][static_cast<std::size_t>(o)] <= 0.0) g[static_cast<std::size_t>(o)] = 0.0;
            }
        }
        std::vector<double> gin(static_cast<std::size_t>(l.in), 0.0);
        for (int o = 0; o < l.out; ++o) {
            const double go = g[static_cast<std::size_t>(o)];
            if (go == 0.0) continue;
            for (int i = 0; i < l.in; ++i) gin[static_cast<std::size_t>(i)] += l.weight[static_cast<std::size_t>(o) * l.in + i] * go;
        }
        g = std::move(gin);
    }

    // d h / d e = I/||e|| - e e^T / ||e||^3
    const double norm = peak * nu;
    double eg = 0.0;
    for (std::size_t i = 0; i < d; ++i) eg += e.values[i] * g[i];
    out.grad.resize(d);
    for (std::size_t i = 0; i < d; ++i) out.grad[i] = g[i] / norm - e.values[i] * eg / (norm * norm * norm);
    return out;
}

RlLoss rl_total_loss(const DepthMap& d_gen, const DepthMap& d_src, const RgbImage& image,
                     const MlpWeights& w, const RewardWeights& rw) {
    return rl_total_loss(d_gen, d_src, image, w, rw, ToyEmbedder{});
}

RlLoss rl_total_loss(const DepthMap& d_gen, const DepthMap& d_src, const RgbImage& image,
                     const MlpWeights& w, const RewardWeights& rw, const Embedder& embedder) {
    if (rw.lambda_depth < 0.0 || rw.lambda_aesthetic < 0.0) throw ArgumentError("reward weights must be >= 0");
    const LossResult depth = cosine_depth_loss(d_gen, d_src);
    const AestheticScore aes = aesthetic_score(embedder.embed(image), w);
    RlLoss out;
    out.depth_loss = depth.value;
    out.aesthetic = aes.score;
    out.value = rw.lambda_depth * depth.value - rw.lambda_aesthetic * aes.score;
    out.grad_depth.resize(depth.grad.size());
    for (std::size_t i = 0; i < depth.grad.size(); ++i) out.grad_depth[i] = rw.lambda_depth * depth.grad[i];
    out.grad_embedding.resize(aes.grad.size());
    for (std::size_t i = 0; i < aes.grad.size(); ++i) out.grad_embedding[i] = -rw.lambda_aesthetic * aes.grad[i];
    return out;
}

}  // namespace depthcur
