#include "depthcur/registration/orb.hpp"

#include "depthcur/error.hpp"

#include <opencv2/core.hpp>
#include <opencv2/features2d.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <tuple>

namespace depthcur {

std::vector<Feature> detect_orb(const GrayImage& image, const OrbParams& params) {
    if (image.width < kOrbMinSide || image.height < kOrbMinSide) {
        throw ArgumentError("detect_orb: image must be at least 31x31");
    }
    cv::Mat gray(image.height, image.width, CV_8UC1);
    for (int y = 0; y < image.height; ++y) {
        auto* row = gray.ptr<std::uint8_t>(y);
        for (int x = 0; x < image.width; ++x) {
            row[x] = static_cast<std::uint8_t>(std::clamp(std::lround(image.at(x, y)), 0L, 255L));
        }
    }

    auto orb = cv::ORB::create(params.max_features, static_cast<float>(params.scale_factor),
                               params.levels, params.patch_size, 0, 2, cv::ORB::HARRIS_SCORE,
                               params.patch_size, params.fast_threshold);
    std::vector<cv::KeyPoint> kps;
    cv::Mat desc;
    orb->detectAndCompute(gray, cv::noArray(), kps, desc);

    std::vector<Feature> out;
    out.reserve(kps.size());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < kps.size(); ++i) {
        Feature f;
        f.keypoint.x = kps[i].pt.x;
        f.keypoint.y = kps[i].pt.y;
        f.keypoint.octave = kps[i].octave;
        double a = kps[i].angle * std::numbers::pi / 180.0;
        a = std::fmod(a, two_pi);
        if (a < 0.0) a += two_pi;
        if (a >= two_pi) a = 0.0;
        f.keypoint.angle = a;
        f.keypoint.response = kps[i].response;
        std::memcpy(f.descriptor.words.data(), desc.ptr<std::uint8_t>(static_cast<int>(i)), 32);
        out.push_back(f);
    }
    std::sort(out.begin(), out.end(), [](const Feature& l, const Feature& r) {
        const auto& a = l.keypoint;
        const auto& b = r.keypoint;
        return std::tie(a.octave, a.y, a.x, a.angle, a.response) <
               std::tie(b.octave, b.y, b.x, b.angle, b.response);
    });
    return out;
}

std::vector<Match> match_descriptors(std::span<const Descriptor256> a,
                                     std::span<const Descriptor256> b) {
    if (a.empty() || b.empty()) return {};
    constexpr int kNone = std::numeric_limits<int>::max();
    std::vector<int> best_for_a(a.size(), -1), dist_a(a.size(), kNone);
    std::vector<int> best_for_b(b.size(), -1), dist_b(b.size(), kNone);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const int d = hamming(a[i], b[j]);
            // Strict '<' keeps the lowest index on ties.
            if (d < dist_a[i]) {
                dist_a[i] = d;
                best_for_a[i] = static_cast<int>(j);
            }
            if (d < dist_b[j]) {
                dist_b[j] = d;
                best_for_b[j] = static_cast<int>(i);
            }
        }
    }
    std::vector<Match> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int j = best_for_a[i];
        if (best_for_b[static_cast<std::size_t>(j)] == static_cast<int>(i)) {
            out.push_back({static_cast<int>(i), j, dist_a[i]});
        }
    }
    return out;
}

}  // namespace depthcur
