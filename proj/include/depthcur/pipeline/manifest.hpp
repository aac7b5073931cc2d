#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace depthcur {

inline constexpr std::size_t kMaxVariants = 4;

/// One source depth map with its original rendering and up to four generated
/// images. Paths are kept as written; resolve() anchors relative ones at the
/// manifest's directory.
struct ManifestEntry {
    std::string id;
    std::string depth_source;
    double depth_scale = 0.001;  // png16 only
    std::string rgb_orig;
    std::vector<std::string> rgb_gen;
    std::optional<std::string> depth_pseudo;
    std::int64_t seed_tag = 0;
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const std::string& p) const;
};

/// JSON Lines, one entry per non-blank line; unknown fields are ignored.
/// Throws FormatError naming the line for malformed input and naming both
/// lines for a duplicate id.
std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& path);

}  // namespace depthcur
