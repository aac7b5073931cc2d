#pragma once

#include "depthcur/core/raster.hpp"
#include "depthcur/random.hpp"
#include "depthcur/registration/affine.hpp"
#include "depthcur/registration/orb.hpp"

namespace depthcur {

struct RegistrationConfig {
    OrbParams orb;
    int min_matches = 10;
    int min_inliers = 10;
    RansacParams ransac;
};

struct RegistrationResult {
    AffineTransform transform;  // generated -> original frame
    int inlier_count = 0;
    int match_count = 0;
    bool succeeded = false;
};

struct Registration {
    RegistrationResult result;
    GrayImage warped;       // generated luma in the original's frame
    BinaryMask coverage;    // all-zero on failure
};

/// Registers `gen` onto `orig`. Never throws for content reasons: too few
/// keypoints, matches or inliers, or a degenerate fit all yield
/// succeeded=false with zero coverage.
Registration register_images(const RgbImage& gen, const RgbImage& orig,
                             const RegistrationConfig& cfg, Rng& rng);

Registration register_luma(const GrayImage& gen, const GrayImage& orig,
                           const RegistrationConfig& cfg, Rng& rng);

}  // namespace depthcur
