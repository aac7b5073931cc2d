#include "depthcur/error.hpp"
#include "depthcur/losses/depth_losses.hpp"
#include "depthcur/losses/reward.hpp"
#include "depthcur/random.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace depthcur {
namespace {

RgbImage solid(int w, int h, std::uint8_t v) {
    RgbImage img(w, h);
    std::fill(img.data.begin(), img.data.end(), v);
    return img;
}

TEST(ToyEmbed, BlackImage) {
    const Embedding e = toy_embed(solid(8, 6, 0));
    ASSERT_EQ(e.values.size(), kToyEmbeddingSize);
    for (int c = 0; c < 3; ++c) {
        for (int b = 0; b < 16; ++b) EXPECT_EQ(e.values[static_cast<std::size_t>(c * 16 + b)], b == 0 ? 1.0 : 0.0);
    }
    for (std::size_t k = 48; k < 56; ++k) EXPECT_EQ(e.values[k], 0.0);
    EXPECT_EQ(e.values[56], 0.0);  // mean
    EXPECT_EQ(e.values[57], 0.0);  // std
    EXPECT_EQ(e.values[63], 0.0);  // entropy
}

TEST(ToyEmbed, WhiteImage) {
    const Embedding e = toy_embed(solid(5, 5, 255));
    for (int c = 0; c < 3; ++c) EXPECT_EQ(e.values[static_cast<std::size_t>(c * 16 + 15)], 1.0);
    EXPECT_NEAR(e.values[56], 255.0, 1e-9);
    EXPECT_NEAR(e.values[57], 0.0, 1e-9);
    EXPECT_NEAR(e.values[60], 255.0, 1e-9);
    EXPECT_NEAR(e.values[61], 255.0, 1e-9);
    EXPECT_EQ(e.values[63], 0.0);
}

TEST(ToyEmbed, HandEvaluatedTwoPixelImage) {
    RgbImage img(2, 1);
    img.data = {0, 0, 0, 255, 255, 255};
    const Embedding e = toy_embed(img);
    EXPECT_EQ(e.values[0], 0.5);
    EXPECT_EQ(e.values[15], 0.5);
    EXPECT_EQ(e.values[48], 1.0);  // single rightward gradient, orientation 0
    for (std::size_t k = 49; k < 56; ++k) EXPECT_EQ(e.values[k], 0.0);
    EXPECT_NEAR(e.values[56], 127.5, 1e-9);
    EXPECT_NEAR(e.values[57], 127.5, 1e-9);
    EXPECT_NEAR(e.values[58], 255.0, 1e-9);
    EXPECT_EQ(e.values[59], 0.0);
    EXPECT_EQ(e.values[60], 0.0);
    EXPECT_NEAR(e.values[61], 255.0, 1e-9);
    EXPECT_NEAR(e.values[62], 127.5, 1e-9);
    EXPECT_NEAR(e.values[63], 1.0, 1e-12);
}

TEST(ToyEmbed, DeterministicAndNormalized) {
    const RgbImage img = testing::noise_image(40, 30, 5);
    const Embedding a = toy_embed(img), b = toy_embed(img);
    EXPECT_EQ(a.values, b.values);
    for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int k = 0; k < 16; ++k) s += a.values[static_cast<std::size_t>(c * 16 + k)];
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
    double o = 0.0;
    for (std::size_t k = 48; k < 56; ++k) o += a.values[k];
    EXPECT_NEAR(o, 1.0, 1e-12);
}

MlpWeights random_mlp(const std::vector<int>& dims, Rng& rng) {
    MlpWeights w;
    w.dims = dims;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        MlpLayer l;
        l.in = dims[k];
        l.out = dims[k + 1];
        l.weight.resize(static_cast<std::size_t>(l.in) * l.out);
        l.bias.resize(static_cast<std::size_t>(l.out));
        for (auto& v : l.weight) v = 2.0 * uniform_unit(rng) - 1.0;
        for (auto& v : l.bias) v = 0.2 * uniform_unit(rng) - 0.1;
        w.layers.push_back(std::move(l));
    }
    return w;
}

// Embedding on a dyadic grid so that c * e is exact for c in {0.5, 2, 10}.
Embedding dyadic_embedding(std::size_t n, Rng& rng) {
    Embedding e;
    e.values.resize(n);
    for (auto& v : e.values) v = static_cast<double>(static_cast<int>(uniform_index(rng, 2001)) - 1000) / 1024.0;
    e.values[0] = 1.0;
    return e;
}

TEST(Aesthetic, SingleLinearLayer) {
    MlpWeights w;
    w.dims = {4, 1};
    w.layers.push_back({4, 1, {1.0, 0.0, 0.0, 0.0}, {0.0}});
    const AestheticScore s = aesthetic_score({{2.0, 0.0, 0.0, 0.0}}, w);
    EXPECT_DOUBLE_EQ(s.score, 1.0);
    const AestheticScore t = aesthetic_score({{3.0, 4.0, 0.0, 0.0}}, w);
    EXPECT_DOUBLE_EQ(t.score, 0.6);
}

TEST(Aesthetic, ScaleInvariantExactly) {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const MlpWeights w = random_mlp({64, 32, 16, 1}, rng);
        const Embedding e = dyadic_embedding(64, rng);
        const double base = aesthetic_score(e, w).score;
        for (double c : {0.5, 2.0, 10.0}) {
            Embedding ce = e;
            for (auto& v : ce.values) v *= c;
            EXPECT_EQ(aesthetic_score(ce, w).score, base) << c;
        }
    }
}

TEST(Aesthetic, ScaleInvariantOnToyEmbeddings) {
    Rng rng(2);
    const MlpWeights w = random_mlp({64, 16, 1}, rng);
    const Embedding e = toy_embed(testing::textured_image(64, 48, 3));
    const double base = aesthetic_score(e, w).score;
    for (double c : {0.5, 2.0, 0.125, 1024.0}) {
        Embedding ce = e;
        for (auto& v : ce.values) v *= c;
        EXPECT_EQ(aesthetic_score(ce, w).score, base);
    }
}

TEST(Aesthetic, Errors) {
    Rng rng(3);
    const MlpWeights w = random_mlp({4, 3, 1}, rng);
    EXPECT_THROW(aesthetic_score({{0.0, 0.0, 0.0, 0.0}}, w), DegenerateError);
    EXPECT_THROW(aesthetic_score({{1.0, 0.0, 0.0}}, w), DimensionError);
}

TEST(Aesthetic, GradientMatchesFiniteDifferences) {
    Rng rng(4);
    const MlpWeights w = random_mlp({12, 8, 6, 1}, rng);
    Embedding e;
    for (int i = 0; i < 12; ++i) e.values.push_back(2.0 * uniform_unit(rng) - 1.0);
    const AestheticScore s = aesthetic_score(e, w);
    const double h = 1e-6;
    for (std::size_t i = 0; i < 12; ++i) {
        Embedding a = e, b = e;
        a.values[i] += h;
        b.values[i] -= h;
        const double fd = (aesthetic_score(a, w).score - aesthetic_score(b, w).score) / (2 * h);
        EXPECT_NEAR(s.grad[i], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
    // Gradient of a scale-invariant function is orthogonal to e.
    double dot = 0.0;
    for (std::size_t i = 0; i < 12; ++i) dot += s.grad[i] * e.values[i];
    EXPECT_NEAR(dot, 0.0, 1e-12);
}

TEST(MlpJson, RoundTripAndValidation) {
    Rng rng(5);
    const MlpWeights w = random_mlp({5, 3, 1}, rng);
    const MlpWeights back = MlpWeights::from_json(w.to_json());
    EXPECT_EQ(back.dims, w.dims);
    ASSERT_EQ(back.layers.size(), 2u);
    EXPECT_EQ(back.layers[0].weight, w.layers[0].weight);
    EXPECT_EQ(back.layers[1].bias, w.layers[1].bias);

    EXPECT_THROW(MlpWeights::from_json("{"), FormatError);
    EXPECT_THROW(MlpWeights::from_json(R"({"dims":[2,1],"layers":[{"W":[1],"b":[0]}]})"), FormatError);
    EXPECT_THROW(MlpWeights::from_json(R"({"dims":[2,1],"layers":[{"W":[1,2],"b":[0,1]}]})"), FormatError);
    EXPECT_THROW(MlpWeights::from_json(R"({"dims":[2,2],"layers":[{"W":[1,2,3,4],"b":[0,1]}]})"), FormatError);
    EXPECT_THROW(MlpWeights::from_json(R"({"dims":[2,1],"layers":[]})"), FormatError);
    EXPECT_NO_THROW(MlpWeights::from_json(R"({"dims":[2,1],"layers":[{"W":[1,2],"b":[0]}]})"));
}

DepthMap random_depth(int w, int h, Rng& rng) {
    DepthMap d(w, h);
    for (auto& v : d.values) v = 0.5 + 5.0 * uniform_unit(rng);
    return d;
}

TEST(RlLoss, ComposesExactly) {
    Rng rng(6);
    const MlpWeights w = random_mlp({64, 16, 1}, rng);
    for (int trial = 0; trial < 5; ++trial) {
        const DepthMap g = random_depth(16, 12, rng), s = random_depth(16, 12, rng);
        const RgbImage img = testing::textured_image(48, 40, static_cast<std::uint64_t>(trial));
        const RlLoss r = rl_total_loss(g, s, img, w);
        const double depth = cosine_depth_loss(g, s).value;
        const double aes = aesthetic_score(toy_embed(img), w).score;
        EXPECT_EQ(r.value, 0.9 * depth - 0.1 * aes);
        EXPECT_EQ(r.depth_loss, depth);
        EXPECT_EQ(r.aesthetic, aes);
        const auto cg = cosine_depth_loss(g, s).grad;
        for (std::size_t i = 0; i < cg.size(); ++i) EXPECT_EQ(r.grad_depth[i], 0.9 * cg[i]);
    }
}

TEST(RlLoss, SpecialCases) {
    Rng rng(7);
    const MlpWeights w = random_mlp({64, 8, 1}, rng);
    const DepthMap d = random_depth(8, 8, rng), s = random_depth(8, 8, rng);
    const RgbImage img = testing::noise_image(32, 32, 1);
    const double aes = aesthetic_score(toy_embed(img), w).score;
    EXPECT_NEAR(rl_total_loss(d, d, img, w).value, -0.1 * aes, 1e-15);
    RewardWeights only_depth{0.9, 0.0};
    EXPECT_EQ(rl_total_loss(d, s, img, w, only_depth).value, 0.9 * cosine_depth_loss(d, s).value);
}

class ConstantEmbedder final : public Embedder {
public:
    Embedding embed(const RgbImage&) const override { return {{1.0, 0.0, 0.0, 0.0}}; }
};

TEST(RlLoss, AcceptsCustomEmbedder) {
    MlpWeights w;
    w.dims = {4, 1};
    w.layers.push_back({4, 1, {2.0, 0.0, 0.0, 0.0}, {0.5}});
    Rng rng(8);
    const DepthMap d = random_depth(4, 4, rng);
    const RlLoss r = rl_total_loss(d, d, RgbImage(2, 2), w, {}, ConstantEmbedder{});
    EXPECT_NEAR(r.value, -0.1 * 2.5, 1e-15);
    EXPECT_EQ(r.grad_embedding.size(), 4u);
}

}  // namespace
}  // namespace depthcur
