#pragma once

#include "depthcur/eval/metrics.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace depthcur {

inline constexpr const char* kToolVersion = "0.1.0";

struct Report {
    EvalConfig config;
    std::vector<SampleMetrics> samples;  // sorted by id
    double absrel = 0.0;
    double delta1 = 0.0;
    double rmse = 0.0;
    std::string version = kToolVersion;
};

/// Unweighted means; throws ArgumentError for an empty list.
Report aggregate(std::vector<SampleMetrics> samples, const EvalConfig& cfg = {});

/// {"config": {...}, "samples": [...], "aggregate": {...}, "version": "..."}
std::string report_to_json(const Report& report);
/// Header row plus one row per sample.
std::string report_to_csv(const Report& report);

/// One line of an evaluation manifest:
///   {"id": ..., "pred_disparity": "p.pfm", "gt_depth": "d.pfm"|"d.png", "gt_scale": 0.001}
struct EvalEntry {
    std::string id;
    std::filesystem::path pred_disparity;
    std::filesystem::path gt_depth;
    double gt_scale = 1.0;
};

/// Relative paths resolve against the manifest's directory.
std::vector<EvalEntry> parse_eval_manifest(const std::filesystem::path& path);
Report evaluate_manifest(std::span<const EvalEntry> entries, const EvalConfig& cfg);

}  // namespace depthcur
