#pragma once

#include "depthcur/eval/metrics.hpp"
#include "depthcur/fusion/fusion.hpp"
#include "depthcur/losses/depth_losses.hpp"
#include "depthcur/losses/reward.hpp"
#include "depthcur/pipeline/manifest.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace depthcur {

struct PipelineConfig {
    FusionConfig fusion;
    EvalConfig eval;
    RewardWeights reward;
    DepthLossConfig loss;
    int workers = 1;
    std::uint64_t global_seed = 0;
    std::filesystem::path output_dir = "curated";

    void validate() const;
};

/// JSON echo of every parameter that can influence outputs.
std::string config_to_json(const PipelineConfig& cfg);

enum class Stage { Pretrain, Finetune };

struct CurationRecord {
    std::string id;
    int variant = 0;
    Stage stage = Stage::Finetune;
    bool accepted = false;
    double valid_fraction = 0.0;
    std::optional<Rect> crop;
    std::optional<std::string> mask_path;  // relative to the output directory
    std::size_t gt_pixel_count = 0;
    std::size_t pseudo_pixel_count = 0;
    std::optional<double> mean_ssim_registered;
    std::optional<double> mean_ssim_direct;
    RegistrationResult registration;
    std::string rgb_gen;
    std::optional<std::string> label_path;
    std::int64_t seed_tag = 0;
};

/// Single-line JSON, keys in a fixed order.
std::string record_to_json(const CurationRecord& r);

/// Mask file name for an (id, variant) pair, relative to the output dir.
std::string mask_relpath(const std::string& id, int variant);

/// Runs the fusion procedure on each generated variant. Accepted variants get
/// their mask written under cfg.output_dir. Every variant yields a pretrain
/// record (pseudo-label supervision) and a finetune record (hybrid mask
/// supervision). Throws on unreadable inputs.
std::vector<CurationRecord> curate_entry(const ManifestEntry& entry, const PipelineConfig& cfg);

struct PipelineSummary {
    std::size_t processed = 0;  // entries
    std::size_t accepted = 0;   // finetune variants
    std::size_t rejected = 0;
    std::size_t failed = 0;     // entries that could not be processed
    double mean_valid_fraction = 0.0;
};

/// Curates every entry on cfg.workers threads. Writes records.jsonl (sorted
/// by id, variant), failures.jsonl and summary.json atomically. Output bytes
/// do not depend on the worker count. Throws IoError if the output directory
/// cannot be written.
PipelineSummary run_pipeline(std::span<const ManifestEntry> entries, const PipelineConfig& cfg);

}  // namespace depthcur
