#include "depthcur/registration/register.hpp"

#include "depthcur/core/convert.hpp"
#include "depthcur/error.hpp"
#include "depthcur/registration/warp.hpp"

namespace depthcur {

namespace {

Registration failed(const GrayImage& orig, int matches) {
    Registration r;
    r.result.match_count = matches;
    r.warped = GrayImage(orig.width, orig.height);
    r.coverage = BinaryMask(orig.width, orig.height);
    return r;
}

std::vector<Descriptor256> descriptors(const std::vector<Feature>& f) {
    std::vector<Descriptor256> out;
    out.reserve(f.size());
    for (const auto& x : f) out.push_back(x.descriptor);
    return out;
}

}  // namespace

Registration register_luma(const GrayImage& gen, const GrayImage& orig,
                           const RegistrationConfig& cfg, Rng& rng) {
    std::vector<Feature> fg, fo;
    try {
        fg = detect_orb(gen, cfg.orb);
        fo = detect_orb(orig, cfg.orb);
    } catch (const ArgumentError&) {
        return failed(orig, 0);
    }
    const auto matches = match_descriptors(descriptors(fg), descriptors(fo));
    const int match_count = static_cast<int>(matches.size());
    if (match_count < cfg.min_matches || match_count < 3) return failed(orig, match_count);

    std::vector<Point2> src, dst;
    src.reserve(matches.size());
    dst.reserve(matches.size());
    for (const auto& m : matches) {
        const auto& a = fg[static_cast<std::size_t>(m.index_a)].keypoint;
        const auto& b = fo[static_cast<std::size_t>(m.index_b)].keypoint;
        src.push_back({a.x, a.y});
        dst.push_back({b.x, b.y});
    }

    RansacResult fit;
    try {
        fit = estimate_affine_ransac(src, dst, cfg.ransac, rng);
    } catch (const DegenerateError&) {
        return failed(orig, match_count);
    }
    if (fit.inlier_count < cfg.min_inliers) {
        Registration r = failed(orig, match_count);
        r.result.inlier_count = fit.inlier_count;
        r.result.transform = fit.transform;
        return r;
    }

    auto warped = warp_affine(gen, fit.transform, orig.width, orig.height);
    Registration r;
    r.result = {fit.transform, fit.inlier_count, match_count, true};
    r.warped = std::move(warped.image);
    r.coverage = std::move(warped.coverage);
    return r;
}

Registration register_images(const RgbImage& gen, const RgbImage& orig,
                             const RegistrationConfig& cfg, Rng& rng) {
    return register_luma(rgb_to_luma(gen), rgb_to_luma(orig), cfg, rng);
}

}  // namespace depthcur
