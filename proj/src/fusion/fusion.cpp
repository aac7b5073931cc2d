#include "depthcur/fusion/fusion.hpp"

#include "depthcur/core/convert.hpp"
#include "depthcur/error.hpp"
#include "depthcur/fusion/crop.hpp"
#include "depthcur/fusion/morphology.hpp"

namespace depthcur {

void FusionConfig::validate() const {
    auto unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!unit(ssim_threshold)) throw ArgumentError("ssim_threshold must be in (0, 1]");
    if (!unit(min_valid_fraction)) throw ArgumentError("min_valid_fraction must be in (0, 1]");
    if (min_matches < 3) throw ArgumentError("min_matches must be >= 3");
    if (crop_size < 1) throw ArgumentError("crop_size must be >= 1");
    if (morph_kernel < 1 || morph_kernel % 2 == 0) throw ArgumentError("morph_kernel must be odd");
    if (erosion_kernel != kFilterErosionKernel) throw ArgumentError("erosion kernel is fixed at 3x3");
}

FusionOutcome build_fusion_mask(const RgbImage& gen, const RgbImage& orig, const DepthMap& depth_gt,
                                const FusionConfig& cfg, Rng& rng) {
    if (!same_size(orig, depth_gt)) {
        throw DimensionError("build_fusion_mask: original image and depth differ in size");
    }
    cfg.validate();

    const GrayImage orig_luma = rgb_to_luma(orig);
    const GrayImage gen_luma = rgb_to_luma(gen);
    FusionOutcome out;

    RegistrationConfig reg_cfg = cfg.registration;
    reg_cfg.min_matches = cfg.min_matches;
    reg_cfg.min_inliers = std::max(reg_cfg.min_inliers, cfg.min_matches);
    const Registration reg = register_luma(gen_luma, orig_luma, reg_cfg, rng);
    out.registration = reg.result;

    BinaryMask registered(orig.width, orig.height);
    if (reg.result.succeeded) {
        const SsimMap map = ssim_map(reg.warped, orig_luma, cfg.ssim, reg.coverage);
        registered = threshold_map(map, cfg.ssim_threshold);
        try {
            out.mean_ssim_registered = mean_ssim(map);
        } catch (const DegenerateError&) {
            // Footprint too thin to hold a full window; leave unset.
        }
    }

    const GrayImage resized = resize_bilinear(gen_luma, orig.width, orig.height);
    const SsimMap direct_map = ssim_map(resized, orig_luma, cfg.ssim);
    const BinaryMask direct = threshold_map(direct_map, cfg.ssim_threshold);
    out.mean_ssim_direct = mean_ssim(direct_map);

    BinaryMask mask = morph_open_close(fuse_or(registered, direct), cfg.morph_kernel);
    mask = erode(mask, cfg.erosion_kernel);
    out.valid_fraction = valid_fraction(mask);
    if (out.valid_fraction > cfg.min_valid_fraction) {
        out.crop = select_crop(mask, orig.width, orig.height, cfg.crop_size, rng);
    }
    out.accepted = out.valid_fraction > cfg.min_valid_fraction && out.crop.has_value();
    out.mask = std::move(mask);
    return out;
}

SupervisionAssignment assign_supervision(const FusionOutcome& outcome, const LabelSources& sources) {
    if (!outcome.accepted || !outcome.crop) {
        throw ArgumentError("assign_supervision: outcome was not accepted");
    }
    const Rect& c = *outcome.crop;
    SupervisionAssignment a{c, BinaryMask(c.width, c.height), 0, 0, sources};
    for (int y = 0; y < c.height; ++y) {
        for (int x = 0; x < c.width; ++x) {
            const std::uint8_t bit = outcome.mask.at(c.x + x, c.y + y);
            a.labels.at(x, y) = bit;
            if (bit) {
                ++a.gt_pixel_count;
            } else {
                ++a.pseudo_pixel_count;
            }
        }
    }
    return a;
}

}  // namespace depthcur
