#pragma once

#include "depthcur/core/raster.hpp"
#include "depthcur/random.hpp"
#include "depthcur/registration/register.hpp"
#include "depthcur/ssim.hpp"

#include <optional>
#include <string>

namespace depthcur {

inline constexpr int kFilterErosionKernel = 3;

struct FusionConfig {
    double ssim_threshold = 0.85;
    int min_matches = 10;
    double min_valid_fraction = 0.5;
    int crop_size = 518;
    int morph_kernel = 5;
    int erosion_kernel = kFilterErosionKernel;  // fixed; validate() rejects other values
    RegistrationConfig registration;  // min_matches is overridden by the field above
    SsimParams ssim;                  // threshold is overridden by ssim_threshold

    void validate() const;
};

struct FusionOutcome {
    BinaryMask mask;  // original-image frame, after morphology and erosion
    double valid_fraction = 0.0;
    bool accepted = false;
    std::optional<Rect> crop;
    RegistrationResult registration;
    std::optional<double> mean_ssim_registered;
    std::optional<double> mean_ssim_direct;
};

/// Similarity-guided supervision mask for one generated image.
///
/// Two masks are OR-ed: SSIM between the registered generated image and the
/// original (restricted to the warp footprint; empty if registration fails),
/// and SSIM between the generated image resized to the original's size and
/// the original. The union is opened and closed with `morph_kernel`, eroded
/// 3x3, and accepted when strictly more than `min_valid_fraction` of its
/// pixels survive and a crop fits. Throws DimensionError when `orig` and
/// `depth_gt` disagree in size.
FusionOutcome build_fusion_mask(const RgbImage& gen, const RgbImage& orig, const DepthMap& depth_gt,
                                const FusionConfig& cfg, Rng& rng);

struct LabelSources {
    std::string ground_truth;             // high-precision depth, used inside the mask
    std::optional<std::string> pseudo;    // teacher prediction, used outside
};

struct SupervisionAssignment {
    Rect crop;
    BinaryMask labels;  // crop-sized; 1 = ground truth, 0 = pseudo-label
    std::size_t gt_pixel_count = 0;
    std::size_t pseudo_pixel_count = 0;
    LabelSources sources;
};

/// Splits the accepted crop into ground-truth and pseudo-label pixels.
/// Throws ArgumentError for a rejected outcome.
SupervisionAssignment assign_supervision(const FusionOutcome& outcome, const LabelSources& sources);

}  // namespace depthcur
