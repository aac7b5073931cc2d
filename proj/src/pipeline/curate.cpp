#include "depthcur/pipeline/curate.hpp"

#include "depthcur/core/io.hpp"
#include "depthcur/error.hpp"
#include "depthcur/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

namespace fs = std::filesystem;

namespace depthcur {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void PipelineConfig::validate() const {
    fusion.validate();
    eval.validate();
    if (workers < 1) throw ArgumentError("worker count must be >= 1");
    if (reward.lambda_depth < 0.0 || reward.lambda_aesthetic < 0.0) throw ArgumentError("reward weights must be >= 0");
    if (loss.trim_fraction < 0.0 || loss.trim_fraction >= 1.0) throw ArgumentError("trim fraction must be in [0, 1)");
}

namespace {

template <class T>
ordered_json opt(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json config_json(const PipelineConfig& cfg) {
    const auto& f = cfg.fusion;
    ordered_json j;
    j["fusion"] = {{"ssim_threshold", f.ssim_threshold},
                   {"min_matches", f.min_matches},
                   {"min_valid_fraction", f.min_valid_fraction},
                   {"crop_size", f.crop_size},
                   {"morph_kernel", f.morph_kernel},
                   {"erosion_kernel", f.erosion_kernel},
                   {"ssim_window", kSsimWindow},
                   {"ssim_sigma", f.ssim.sigma},
                   {"orb_max_features", f.registration.orb.max_features},
                   {"orb_fast_threshold", f.registration.orb.fast_threshold},
                   {"orb_levels", f.registration.orb.levels},
                   {"orb_scale_factor", f.registration.orb.scale_factor},
                   {"ransac_iterations", f.registration.ransac.iterations},
                   {"ransac_inlier_px", f.registration.ransac.inlier_px}};
    j["eval"] = {{"delta_threshold", cfg.eval.delta_threshold},
                 {"disparity_floor", cfg.eval.disparity_floor},
                 {"max_depth", opt(cfg.eval.max_depth)}};
    j["reward"] = {{"lambda_depth", cfg.reward.lambda_depth}, {"lambda_aesthetic", cfg.reward.lambda_aesthetic}};
    j["loss"] = {{"ssi_weight", cfg.loss.ssi_weight},
                 {"gm_weight", cfg.loss.gm_weight},
                 {"trim_fraction", cfg.loss.trim_fraction},
                 {"gm_scales", cfg.loss.gm_scales}};
    j["global_seed"] = cfg.global_seed;
    return j;
}

ordered_json rect_json(const std::optional<Rect>& r) {
    if (!r) return nullptr;
    return {{"x", r->x}, {"y", r->y}, {"width", r->width}, {"height", r->height}};
}

struct EntryResult {
    std::vector<CurationRecord> records;
    std::optional<std::string> error;
};

}  // namespace

std::string config_to_json(const PipelineConfig& cfg) { return config_json(cfg).dump(); }

std::string record_to_json(const CurationRecord& r) {
    ordered_json j;
    j["id"] = r.id;
    j["variant"] = r.variant;
    j["stage"] = r.stage == Stage::Pretrain ? "pretrain" : "finetune";
    j["accepted"] = r.accepted;
    j["valid_fraction"] = r.valid_fraction;
    j["crop"] = rect_json(r.crop);
    j["mask_path"] = opt(r.mask_path);
    j["gt_pixel_count"] = r.gt_pixel_count;
    j["pseudo_pixel_count"] = r.pseudo_pixel_count;
    j["mean_ssim_registered"] = opt(r.mean_ssim_registered);
    j["mean_ssim_direct"] = opt(r.mean_ssim_direct);
    j["registration"] = {{"succeeded", r.registration.succeeded},
                         {"match_count", r.registration.match_count},
                         {"inlier_count", r.registration.inlier_count},
                         {"transform", r.registration.transform.m}};
    j["rgb_gen"] = r.rgb_gen;
    j["label_path"] = opt(r.label_path);
    j["seed_tag"] = r.seed_tag;
    return j.dump();
}

std::string mask_relpath(const std::string& id, int variant) {
    std::string stem;
    bool changed = false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '-' || c == '_' || c == '.';
        stem += ok ? c : '_';
        changed = changed || !ok;
    }
    if (changed || stem.empty() || stem.front() == '.') {
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(id)));
        stem += "_";
        stem += hex;
    }
    return "masks/" + stem + "_v" + std::to_string(variant) + ".png";
}

std::vector<CurationRecord> curate_entry(const ManifestEntry& entry, const PipelineConfig& cfg) {
    const fs::path depth_path = entry.resolve(entry.depth_source);
    const DepthMap depth = load_depth(depth_path, depth_format_from_path(depth_path), entry.depth_scale);
    const RgbImage orig = load_rgb(entry.resolve(entry.rgb_orig));
    std::vector<RgbImage> gens;
    gens.reserve(entry.rgb_gen.size());
    for (const auto& g : entry.rgb_gen) gens.push_back(load_rgb(entry.resolve(g)));

    std::vector<CurationRecord> out;
    for (std::size_t v = 0; v < gens.size(); ++v) {
        const int variant = static_cast<int>(v);
        Rng rng(derive_seed(cfg.global_seed, entry.id, v));
        const FusionOutcome fused = build_fusion_mask(gens[v], orig, depth, cfg.fusion, rng);

        CurationRecord base;
        base.id = entry.id;
        base.variant = variant;
        base.accepted = fused.accepted;
        base.valid_fraction = fused.valid_fraction;
        base.crop = fused.crop;
        base.mean_ssim_registered = fused.mean_ssim_registered;
        base.mean_ssim_direct = fused.mean_ssim_direct;
        base.registration = fused.registration;
        base.rgb_gen = entry.rgb_gen[v];
        base.seed_tag = entry.seed_tag;
        if (!fused.accepted) base.crop.reset();

        CurationRecord finetune = base;
        finetune.stage = Stage::Finetune;
        if (fused.accepted) {
            const SupervisionAssignment sup =
                assign_supervision(fused, LabelSources{entry.depth_source, entry.depth_pseudo});
            const std::string rel = mask_relpath(entry.id, variant);
            fs::create_directories((cfg.output_dir / rel).parent_path());
            save_mask(fused.mask, cfg.output_dir / rel);
            finetune.mask_path = rel;
            base.mask_path = rel;
            finetune.gt_pixel_count = sup.gt_pixel_count;
            finetune.pseudo_pixel_count = sup.pseudo_pixel_count;
            finetune.label_path = entry.depth_source;
        }

        CurationRecord pretrain = base;
        pretrain.stage = Stage::Pretrain;
        pretrain.label_path = entry.depth_pseudo;
        pretrain.pseudo_pixel_count = static_cast<std::size_t>(gens[v].width) * gens[v].height;

        out.push_back(std::move(pretrain));
        out.push_back(std::move(finetune));
    }
    return out;
}

PipelineSummary run_pipeline(std::span<const ManifestEntry> entries, const PipelineConfig& cfg) {
    cfg.validate();
    std::error_code ec;
    fs::create_directories(cfg.output_dir / "masks", ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string());
    // Fail before doing any work if the directory is not writable.
    write_file_atomic(cfg.output_dir / ".write-probe", "");
    fs::remove(cfg.output_dir / ".write-probe", ec);

    std::vector<EntryResult> results(entries.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < entries.size(); i = next++) {
            try {
                results[i].records = curate_entry(entries[i], cfg);
            } catch (const std::exception& ex) {
                results[i].records.clear();
                results[i].error = ex.what();
            }
        }
    };
    {
        const int n = std::min<int>(cfg.workers, std::max<int>(1, static_cast<int>(entries.size())));
        std::vector<std::jthread> pool;
        for (int t = 1; t < n; ++t) pool.emplace_back(work);
        work();
    }

    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return entries[a].id < entries[b].id; });

    PipelineSummary summary;
    summary.processed = entries.size();
    std::string records, failures;
    double vf_sum = 0.0;
    for (std::size_t i : order) {
        const auto& r = results[i];
        if (r.error) {
            ++summary.failed;
            failures += ordered_json{{"id", entries[i].id}, {"error", *r.error}}.dump() + "\n";
            continue;
        }
        for (const auto& rec : r.records) {
            records += record_to_json(rec) + "\n";
            if (rec.stage != Stage::Finetune) continue;
            (rec.accepted ? summary.accepted : summary.rejected) += 1;
            vf_sum += rec.valid_fraction;
        }
    }
    const std::size_t variants = summary.accepted + summary.rejected;
    summary.mean_valid_fraction = variants ? vf_sum / static_cast<double>(variants) : 0.0;

    ordered_json sj;
    sj["processed"] = summary.processed;
    sj["accepted"] = summary.accepted;
    sj["rejected"] = summary.rejected;
    sj["failed"] = summary.failed;
    sj["mean_valid_fraction"] = summary.mean_valid_fraction;
    sj["config"] = config_json(cfg);
    write_file_atomic(cfg.output_dir / "records.jsonl", records);
    write_file_atomic(cfg.output_dir / "failures.jsonl", failures);
    write_file_atomic(cfg.output_dir / "summary.json", sj.dump(2) + "\n");
    return summary;
}

}  // namespace depthcur
