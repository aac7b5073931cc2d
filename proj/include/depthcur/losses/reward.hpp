#pragma once

#include "depthcur/core/raster.hpp"
#include "depthcur/losses/depth_losses.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace depthcur {

inline constexpr std::size_t kToyEmbeddingSize = 64;

struct Embedding {
    std::vector<double> values;
};

/// Image encoder feeding the aesthetic head.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual Embedding embed(const RgbImage& image) const = 0;
};

/// Deterministic 64-d hand-crafted features, laid out as:
///   [0, 48)  16-bin normalized histograms of R, G, B
///   [48, 56) 8-bin luma gradient-orientation histogram, magnitude weighted,
///            normalized (all zero for a flat image)
///   [56, 64) luma mean, std, mean|dx|, mean|dy|, min, max, median, and the
///            base-2 entropy of the 16-bin luma histogram
Embedding toy_embed(const RgbImage& image);

class ToyEmbedder final : public Embedder {
public:
    Embedding embed(const RgbImage& image) const override { return toy_embed(image); }
};

struct MlpLayer {
    int in = 0;
    int out = 0;
    std::vector<double> weight;  // out x in, row-major
    std::vector<double> bias;
};

/// ReLU MLP with a linear scalar output.
struct MlpWeights {
    std::vector<int> dims;
    std::vector<MlpLayer> layers;

    /// Throws FormatError on inconsistent dims or array lengths.
    void validate() const;

    /// {"dims": [d0, ..., 1], "layers": [{"W": [...], "b": [...]}, ...]}
    static MlpWeights from_json(const std::string& text);
    static MlpWeights load(const std::filesystem::path& path);
    std::string to_json() const;
};

struct AestheticScore {
    double score = 0.0;
    std::vector<double> grad;  // d score / d embedding
};

/// MLP applied to e / ||e||_2. Throws DegenerateError for a zero embedding
/// and DimensionError when e does not match dims[0].
AestheticScore aesthetic_score(const Embedding& e, const MlpWeights& w);

struct RewardWeights {
    double lambda_depth = 0.9;
    double lambda_aesthetic = 0.1;
};

struct RlLoss {
    double value = 0.0;
    double depth_loss = 0.0;       // cosine loss term, unweighted
    double aesthetic = 0.0;        // reward term, unweighted
    std::vector<double> grad_depth;      // d value / d d_gen
    std::vector<double> grad_embedding;  // d value / d embedding
};

/// lambda_depth * (1 - cos(d_gen, d_src)) - lambda_aesthetic * aesthetic(image).
RlLoss rl_total_loss(const DepthMap& d_gen, const DepthMap& d_src, const RgbImage& image,
                     const MlpWeights& w, const RewardWeights& rw = {});
RlLoss rl_total_loss(const DepthMap& d_gen, const DepthMap& d_src, const RgbImage& image,
                     const MlpWeights& w, const RewardWeights& rw, const Embedder& embedder);

}  // namespace depthcur
