#include "depthcur/core/convert.hpp"
#include "depthcur/error.hpp"
#include "depthcur/random.hpp"
#include "depthcur/registration/affine.hpp"
#include "depthcur/registration/orb.hpp"
#include "depthcur/registration/register.hpp"
#include "depthcur/registration/warp.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace depthcur {
namespace {

GrayImage white_square(int size, int x0, int y0, int side) {
    GrayImage g(size, size, 0.0);
    for (int y = y0; y < y0 + side; ++y)
        for (int x = x0; x < x0 + side; ++x) g.at(x, y) = 255.0;
    return g;
}

TEST(Orb, ConstantImageHasNoKeypoints) {
    EXPECT_TRUE(detect_orb(GrayImage(128, 128, 90.0)).empty());
}

TEST(Orb, TooSmallThrows) {
    EXPECT_THROW(detect_orb(GrayImage(30, 64)), ArgumentError);
    EXPECT_NO_THROW(detect_orb(GrayImage(31, 31)));
}

TEST(Orb, FindsSquareCorners) {
    const auto features = detect_orb(white_square(128, 44, 44, 40));
    ASSERT_FALSE(features.empty());
    const Point2 corners[] = {{44, 44}, {83, 44}, {44, 83}, {83, 83}};
    for (const Point2& c : corners) {
        bool found = false;
        for (const auto& f : features) {
            if (std::hypot(f.keypoint.x - c.x, f.keypoint.y - c.y) <= 3.0) found = true;
        }
        EXPECT_TRUE(found) << c.x << "," << c.y;
    }
    for (const auto& f : features) {
        EXPECT_GE(f.keypoint.angle, 0.0);
        EXPECT_LT(f.keypoint.angle, 2 * std::numbers::pi);
    }
}

TEST(Orb, DeterministicAcrossCallsAndThreads) {
    const GrayImage g = rgb_to_luma(testing::textured_image(200, 160, 3));
    const auto ref = detect_orb(g);
    ASSERT_GT(ref.size(), 20u);
    std::vector<std::vector<Feature>> results(4);
    {
        std::vector<std::jthread> threads;
        for (auto& r : results) threads.emplace_back([&r, &g] { r = detect_orb(g); });
    }
    for (const auto& r : results) {
        ASSERT_EQ(r.size(), ref.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            EXPECT_EQ(r[i].descriptor, ref[i].descriptor);
            EXPECT_EQ(r[i].keypoint.x, ref[i].keypoint.x);
            EXPECT_EQ(r[i].keypoint.y, ref[i].keypoint.y);
        }
    }
}

TEST(Orb, RespectsFeatureCap) {
    OrbParams p;
    p.max_features = 50;
    const auto f = detect_orb(rgb_to_luma(testing::textured_image(320, 240, 5)), p);
    EXPECT_LE(f.size(), 50u);
    EXPECT_GT(f.size(), 0u);
}

Descriptor256 random_descriptor(Rng& rng) {
    Descriptor256 d;
    for (auto& w : d.words) w = rng();
    return d;
}

TEST(Hamming, MetricAxioms) {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_descriptor(rng), b = random_descriptor(rng), c = random_descriptor(rng);
        EXPECT_EQ(hamming(a, a), 0);
        EXPECT_EQ(hamming(a, b), hamming(b, a));
        EXPECT_LE(hamming(a, c), hamming(a, b) + hamming(b, c));
        EXPECT_GE(hamming(a, b), 0);
        EXPECT_LE(hamming(a, b), 256);
    }
    Descriptor256 z, one;
    one.words[2] = 0b1011;
    EXPECT_EQ(hamming(z, one), 3);
}

std::vector<Match> oracle_matches(const std::vector<Descriptor256>& a, const std::vector<Descriptor256>& b) {
    auto best = [](const std::vector<Descriptor256>& from, const std::vector<Descriptor256>& to, std::size_t i) {
        int bi = -1, bd = 1 << 30;
        for (std::size_t j = 0; j < to.size(); ++j) {
            const int d = hamming(from[i], to[j]);
            if (d < bd) {
                bd = d;
                bi = static_cast<int>(j);
            }
        }
        return bi;
    };
    std::vector<Match> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int j = best(a, b, i);
        if (j >= 0 && best(b, a, static_cast<std::size_t>(j)) == static_cast<int>(i)) {
            out.push_back({static_cast<int>(i), j, hamming(a[i], b[static_cast<std::size_t>(j)])});
        }
    }
    return out;
}

TEST(Matching, IdenticalSetsMatchOneToOne) {
    Rng rng(2);
    std::vector<Descriptor256> a(60);
    for (auto& d : a) d = random_descriptor(rng);
    const auto m = match_descriptors(a, a);
    ASSERT_EQ(m.size(), a.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        EXPECT_EQ(m[i].index_a, static_cast<int>(i));
        EXPECT_EQ(m[i].index_b, static_cast<int>(i));
        EXPECT_EQ(m[i].hamming, 0);
    }
}

TEST(Matching, AgreesWithExhaustiveOracle) {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Descriptor256> a(40), b(55);
        for (auto& d : a) d = random_descriptor(rng);
        for (auto& d : b) d = random_descriptor(rng);
        // Plant noisy copies so there are real matches too.
        for (int k = 0; k < 20; ++k) {
            b[static_cast<std::size_t>(k * 2)] = a[static_cast<std::size_t>(k)];
            b[static_cast<std::size_t>(k * 2)].words[0] ^= (rng() & 0xff);
        }
        EXPECT_EQ(match_descriptors(a, b), oracle_matches(a, b));
    }
}

TEST(Matching, TiesGoToLowerIndex) {
    Descriptor256 d;
    d.words[0] = 7;
    const std::vector<Descriptor256> a{d};
    const std::vector<Descriptor256> b{d, d, d};
    const auto m = match_descriptors(a, b);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0].index_b, 0);
    EXPECT_TRUE(match_descriptors(a, std::vector<Descriptor256>{}).empty());
}

double max_model_error(const AffineTransform& t, const AffineTransform& truth, const std::vector<Point2>& pts) {
    double e = 0.0;
    for (const auto& p : pts) {
        const Point2 a = t.apply(p), b = truth.apply(p);
        e = std::max(e, std::hypot(a.x - b.x, a.y - b.y));
    }
    return e;
}

std::vector<Point2> random_points(Rng& rng, int n, double extent) {
    std::vector<Point2> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) p = {extent * uniform_unit(rng), extent * uniform_unit(rng)};
    return pts;
}

TEST(Affine, InverseAndApply) {
    const AffineTransform t{{1.2, 0.1, 5.0, -0.2, 0.9, -3.0}};
    const AffineTransform inv = t.inverse();
    for (const Point2 p : {Point2{0, 0}, Point2{10, -4}, Point2{123.5, 77.25}}) {
        const Point2 q = inv.apply(t.apply(p));
        EXPECT_NEAR(q.x, p.x, 1e-12);
        EXPECT_NEAR(q.y, p.y, 1e-12);
    }
    const AffineTransform singular{{1, 2, 0, 2, 4, 0}};
    EXPECT_FALSE(singular.invertible());
    EXPECT_THROW(singular.inverse(), DegenerateError);
}

TEST(Ransac, RecoversPureTranslation) {
    Rng rng(4);
    const auto src = random_points(rng, 30, 200.0);
    const AffineTransform truth = AffineTransform::translation(5.0, -2.0);
    std::vector<Point2> dst;
    for (const auto& p : src) dst.push_back(truth.apply(p));
    Rng r2(5);
    const RansacResult res = estimate_affine_ransac(src, dst, {}, r2);
    EXPECT_EQ(res.inlier_count, 30);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(res.transform.m[static_cast<std::size_t>(i)], truth.m[static_cast<std::size_t>(i)], 1e-9);
}

TEST(Ransac, SurvivesThirtyPercentOutliers) {
    Rng rng(6);
    const auto src = random_points(rng, 200, 500.0);
    const AffineTransform truth{{1.05, -0.08, 12.0, 0.06, 0.97, -7.0}};
    std::vector<Point2> dst;
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (i % 10 < 7) {
            const Point2 q = truth.apply(src[i]);
            dst.push_back({q.x + 0.4 * (uniform_unit(rng) - 0.5), q.y + 0.4 * (uniform_unit(rng) - 0.5)});
        } else {
            dst.push_back({500.0 * uniform_unit(rng), 500.0 * uniform_unit(rng)});
        }
    }
    Rng r2(7);
    const RansacResult res = estimate_affine_ransac(src, dst, {}, r2);
    EXPECT_GE(res.inlier_count, 140);
    EXPECT_LT(max_model_error(res.transform, truth, src), 0.5);
}

TEST(Ransac, ExactDataHasNoResidual) {
    Rng rng(8);
    const auto src = random_points(rng, 25, 300.0);
    const AffineTransform truth{{0.8, 0.3, -4.0, -0.25, 1.1, 9.0}};
    std::vector<Point2> dst;
    for (const auto& p : src) dst.push_back(truth.apply(p));
    Rng r2(9);
    const RansacResult res = estimate_affine_ransac(src, dst, {}, r2);
    EXPECT_LT(max_model_error(res.transform, truth, src), 1e-6);
}

TEST(Ransac, Deterministic) {
    Rng rng(10);
    const auto src = random_points(rng, 50, 100.0);
    auto dst = src;
    for (auto& p : dst) p.x += 1.0 + (rng() % 3 == 0 ? 40.0 : 0.0);
    Rng a(11), b(11);
    const auto ra = estimate_affine_ransac(src, dst, {}, a);
    const auto rb = estimate_affine_ransac(src, dst, {}, b);
    EXPECT_EQ(ra.transform.m, rb.transform.m);
    EXPECT_EQ(ra.inliers, rb.inliers);
}

TEST(Ransac, DegenerateInputsThrow) {
    Rng rng(12);
    const std::vector<Point2> two{{0, 0}, {1, 1}};
    EXPECT_THROW(estimate_affine_ransac(two, two, {}, rng), DegenerateError);
    std::vector<Point2> line;
    for (int i = 0; i < 20; ++i) line.push_back({static_cast<double>(i), 2.0 * i});
    EXPECT_THROW(estimate_affine_ransac(line, line, {}, rng), DegenerateError);
    EXPECT_THROW(fit_affine_lsq(line, line), DegenerateError);
}

TEST(Warp, IdentityIsExactCopy) {
    const GrayImage g = testing::random_gray(23, 17, 13);
    const auto w = warp_affine(g, AffineTransform::identity(), 23, 17);
    EXPECT_EQ(w.image, g);
    EXPECT_EQ(w.coverage.count_ones(), 23u * 17u);
}

TEST(Warp, ShiftOutOfFrameHasNoCoverage) {
    const GrayImage g = testing::random_gray(20, 10, 14);
    const auto w = warp_affine(g, AffineTransform::translation(20.0, 0.0), 20, 10);
    EXPECT_EQ(w.coverage.count_ones(), 0u);
    for (double v : w.image.data) EXPECT_EQ(v, 0.0);
}

TEST(Warp, IntegerShiftMovesPixels) {
    const GrayImage g = testing::random_gray(20, 10, 15);
    const auto w = warp_affine(g, AffineTransform::translation(3.0, 1.0), 20, 10);
    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 20; ++x) {
            const bool inside = x >= 3 && y >= 1;
            EXPECT_EQ(w.coverage.at(x, y), inside ? 1 : 0);
            if (inside) EXPECT_NEAR(w.image.at(x, y), g.at(x - 3, y - 1), 1e-12);
        }
    }
}

TEST(Warp, RotationMatchesNaiveBilinear) {
    const GrayImage g = testing::random_gray(40, 30, 16);
    const double a = 0.3;
    const AffineTransform t{{std::cos(a), -std::sin(a), 8.0, std::sin(a), std::cos(a), -5.0}};
    const auto w = warp_affine(g, t, 40, 30);
    const AffineTransform inv = t.inverse();
    int checked = 0;
    for (int y = 0; y < 30; ++y) {
        for (int x = 0; x < 40; ++x) {
            const Point2 s = inv.apply({static_cast<double>(x), static_cast<double>(y)});
            if (s.x < 0.01 || s.y < 0.01 || s.x > 38.99 || s.y > 28.99) continue;
            const int x0 = static_cast<int>(std::floor(s.x)), y0 = static_cast<int>(std::floor(s.y));
            const double fx = s.x - x0, fy = s.y - y0;
            const double v = (1 - fx) * (1 - fy) * g.at(x0, y0) + fx * (1 - fy) * g.at(x0 + 1, y0) +
                             (1 - fx) * fy * g.at(x0, y0 + 1) + fx * fy * g.at(x0 + 1, y0 + 1);
            ASSERT_TRUE(w.coverage.at(x, y));
            EXPECT_NEAR(w.image.at(x, y), v, 1e-4);
            ++checked;
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(Warp, RgbWarpMatchesPerChannel) {
    const RgbImage c = testing::noise_image(16, 12, 17);
    const auto w = warp_affine(c, AffineTransform::translation(2.0, 3.0), 16, 12);
    EXPECT_EQ(w.image.at(5, 6, 1), c.at(3, 3, 1));
    EXPECT_EQ(w.coverage.at(1, 1), 0);
}

TEST(Register, SelfPairIsNearIdentity) {
    const RgbImage img = testing::textured_image(320, 240, 18);
    Rng rng(19);
    const Registration r = register_images(img, img, {}, rng);
    ASSERT_TRUE(r.result.succeeded);
    EXPECT_GE(static_cast<double>(r.result.inlier_count) / r.result.match_count, 0.9);
    const AffineTransform id = AffineTransform::identity();
    for (int i = 0; i < 6; ++i) {
        const double tol = (i == 2 || i == 5) ? 0.5 : 0.01;
        EXPECT_NEAR(r.result.transform.m[static_cast<std::size_t>(i)], id.m[static_cast<std::size_t>(i)], tol);
    }
    EXPECT_GT(r.coverage.count_ones(), 320u * 240u * 95 / 100);
}

TEST(Register, RecoversShift) {
    const RgbImage orig = testing::textured_image(320, 240, 20);
    const RgbImage gen = testing::shifted(orig, 8, 0, 128);
    Rng rng(21);
    const Registration r = register_images(gen, orig, {}, rng);
    ASSERT_TRUE(r.result.succeeded);
    EXPECT_NEAR(r.result.transform.m[2], -8.0, 0.5);
    EXPECT_NEAR(r.result.transform.m[5], 0.0, 0.5);
    EXPECT_NEAR(r.result.transform.m[0], 1.0, 0.01);
    EXPECT_NEAR(r.result.transform.m[4], 1.0, 0.01);
}

TEST(Register, FeaturelessPairFailsCleanly) {
    RgbImage flat(100, 100);
    std::fill(flat.data.begin(), flat.data.end(), std::uint8_t{77});
    Rng rng(22);
    const Registration r = register_images(flat, flat, {}, rng);
    EXPECT_FALSE(r.result.succeeded);
    EXPECT_EQ(r.coverage.count_ones(), 0u);
    EXPECT_EQ(r.coverage.width, 100);
}

TEST(Register, TinyImageFailsCleanly) {
    const RgbImage tiny = testing::noise_image(20, 20, 1);
    Rng rng(23);
    EXPECT_FALSE(register_images(tiny, tiny, {}, rng).result.succeeded);
}

}  // namespace
}  // namespace depthcur
