#include "depthcur/cli.hpp"

#include "depthcur/core/convert.hpp"
#include "depthcur/core/io.hpp"
#include "depthcur/error.hpp"
#include "depthcur/eval/report.hpp"
#include "depthcur/losses/gradcheck.hpp"
#include "depthcur/losses/reward.hpp"
#include "depthcur/pipeline/curate.hpp"
#include "depthcur/registration/register.hpp"
#include "depthcur/ssim.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <iomanip>
#include <ostream>

namespace depthcur {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kWorkersEnv = "DEPTHCUR_WORKERS";

struct Options {
    // curate
    std::string manifest;
    std::string out_dir;
    PipelineConfig pipeline;
    std::optional<int> workers;
    // eval
    std::string pred_manifest;
    std::string report_path;
    std::string csv_path;
    double max_depth = 0.0;
    // reward
    std::string depth_gen, depth_src, image, mlp;
    double depth_scale = 0.001;
    // ssim / register
    std::string a, b;
    // gradcheck
    std::string op = "all";
    std::uint64_t gradcheck_seed = 7;
    int probes = 20;
};

DepthMap load_any_depth(const std::string& path, double scale) {
    return load_depth(path, depth_format_from_path(path), scale);
}

int cmd_curate(Options& o, std::ostream& out) {
    PipelineConfig cfg = o.pipeline;
    cfg.output_dir = o.out_dir;
    if (o.workers) {
        cfg.workers = *o.workers;
    } else if (const char* env = std::getenv(kWorkersEnv)) {
        try {
            cfg.workers = std::stoi(env);
        } catch (const std::exception&) {
            throw ArgumentError(std::string(kWorkersEnv) + " is not an integer");
        }
    }
    cfg.validate();
    const auto entries = parse_manifest(o.manifest);
    const PipelineSummary s = run_pipeline(entries, cfg);
    ordered_json j{{"processed", s.processed},
                   {"accepted", s.accepted},
                   {"rejected", s.rejected},
                   {"failed", s.failed},
                   {"mean_valid_fraction", s.mean_valid_fraction}};
    out << j.dump() << '\n';
    return kExitOk;
}

int cmd_eval(Options& o, std::ostream& out) {
    EvalConfig cfg = o.pipeline.eval;
    if (o.max_depth > 0.0) cfg.max_depth = o.max_depth;
    cfg.validate();
    const auto entries = parse_eval_manifest(o.pred_manifest);
    const Report report = evaluate_manifest(entries, cfg);
    write_file_atomic(o.report_path, report_to_json(report));
    if (!o.csv_path.empty()) write_file_atomic(o.csv_path, report_to_csv(report));
    out << std::setprecision(6) << "absrel " << report.absrel << "  delta1 " << report.delta1
        << "  rmse " << report.rmse << "  (" << report.samples.size() << " samples)\n";
    return kExitOk;
}

int cmd_reward(Options& o, std::ostream& out) {
    const DepthMap gen = load_any_depth(o.depth_gen, o.depth_scale);
    const DepthMap src = load_any_depth(o.depth_src, o.depth_scale);
    const RgbImage img = load_rgb(o.image);
    const MlpWeights w = MlpWeights::load(o.mlp);
    const RlLoss l = rl_total_loss(gen, src, img, w, o.pipeline.reward);
    ordered_json j{{"total", l.value},
                   {"depth_loss", l.depth_loss},
                   {"aesthetic", l.aesthetic},
                   {"lambda_depth", o.pipeline.reward.lambda_depth},
                   {"lambda_aesthetic", o.pipeline.reward.lambda_aesthetic}};
    out << j.dump() << '\n';
    return kExitOk;
}

int cmd_ssim(Options& o, std::ostream& out) {
    const RgbImage a = load_rgb(o.a);
    const RgbImage b = resize_bilinear(load_rgb(o.b), a.width, a.height);
    const SsimMap m = ssim_map(rgb_to_luma(a), rgb_to_luma(b));
    const double thr = o.pipeline.fusion.ssim_threshold;
    const BinaryMask mask = threshold_map(m, thr);
    ordered_json j{{"mean_ssim", mean_ssim(m)},
                   {"threshold", thr},
                   {"above_threshold_fraction",
                    static_cast<double>(mask.count_ones()) / static_cast<double>(mask.bits.size())}};
    out << j.dump() << '\n';
    return kExitOk;
}

int cmd_register(Options& o, std::ostream& out) {
    const RgbImage gen = load_rgb(o.a);
    const RgbImage orig = load_rgb(o.b);
    RegistrationConfig cfg = o.pipeline.fusion.registration;
    cfg.min_matches = o.pipeline.fusion.min_matches;
    cfg.min_inliers = std::max(cfg.min_inliers, cfg.min_matches);
    Rng rng(o.pipeline.global_seed);
    const Registration r = register_images(gen, orig, cfg, rng);
    ordered_json j{{"succeeded", r.result.succeeded},
                   {"match_count", r.result.match_count},
                   {"inlier_count", r.result.inlier_count},
                   {"transform", r.result.transform.m},
                   {"coverage_fraction",
                    static_cast<double>(r.coverage.count_ones()) / static_cast<double>(r.coverage.bits.size())}};
    out << j.dump() << '\n';
    return kExitOk;
}

int cmd_gradcheck(Options& o, std::ostream& out) {
    std::vector<GradOp> ops;
    if (o.op == "all") {
        ops = {GradOp::Ssi, GradOp::Gm, GradOp::Cosine, GradOp::Aesthetic};
    } else {
        ops = {grad_op_from_string(o.op)};
    }
    bool ok = true;
    for (GradOp op : ops) {
        const GradcheckReport r = gradcheck_random_probes(op, o.gradcheck_seed, o.probes);
        const double tol = gradcheck_tolerance(op);
        const bool pass = r.max_rel_error < tol;
        ok = ok && pass;
        out << std::left << std::setw(10) << to_string(op) << " max_rel_error " << std::scientific
            << std::setprecision(3) << r.max_rel_error << "  tol " << tol << "  "
            << (pass ? "ok" : "FAIL") << std::defaultfloat << '\n';
    }
    return ok ? kExitOk : kExitValidation;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Depth supervision curation, loss verification and evaluation tools", "depthcur"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    Options o;
    auto& fusion = o.pipeline.fusion;

    auto* curate = app.add_subcommand("curate", "Build fusion masks and curation records for a manifest");
    curate->add_option("manifest", o.manifest, "JSONL manifest")->required();
    curate->add_option("--out", o.out_dir, "Output directory")->required();
    curate->add_option("--ssim-threshold", fusion.ssim_threshold, "Per-pixel SSIM threshold")->capture_default_str();
    curate->add_option("--min-matches", fusion.min_matches, "Minimum ORB matches and inliers")->capture_default_str();
    curate->add_option("--min-valid-fraction", fusion.min_valid_fraction, "Acceptance fraction (strict)")->capture_default_str();
    curate->add_option("--crop", fusion.crop_size, "Crop side length")->capture_default_str();
    curate->add_option("--seed", o.pipeline.global_seed, "Global seed")->capture_default_str();
    curate->add_option("--workers", o.workers, std::string("Worker threads (default: $") + kWorkersEnv + " or 1)");

    auto* eval = app.add_subcommand("eval", "Affine-invariant depth evaluation");
    eval->add_option("pred-manifest", o.pred_manifest, "JSONL of {id, pred_disparity, gt_depth, gt_scale}")->required();
    eval->add_option("--out", o.report_path, "Report JSON path")->required();
    eval->add_option("--delta", o.pipeline.eval.delta_threshold, "delta1 ratio threshold")->capture_default_str();
    eval->add_option("--max-depth", o.max_depth, "Ignore ground truth beyond this depth");
    eval->add_option("--csv", o.csv_path, "Also write per-sample CSV");

    auto* reward = app.add_subcommand("reward", "Evaluate the depth + aesthetic objective");
    reward->add_option("depth-gen", o.depth_gen)->required();
    reward->add_option("depth-src", o.depth_src)->required();
    reward->add_option("image", o.image)->required();
    reward->add_option("--mlp", o.mlp, "MLP weights JSON")->required();
    reward->add_option("--lambda-depth", o.pipeline.reward.lambda_depth)->capture_default_str();
    reward->add_option("--lambda-aesthetic", o.pipeline.reward.lambda_aesthetic)->capture_default_str();
    reward->add_option("--depth-scale", o.depth_scale, "Units per code for 16-bit PNG depth")->capture_default_str();

    auto* ssim = app.add_subcommand("ssim", "Mean SSIM between two images (second resized to the first)");
    ssim->add_option("a", o.a)->required();
    ssim->add_option("b", o.b)->required();
    ssim->add_option("--threshold", fusion.ssim_threshold)->capture_default_str();

    auto* reg = app.add_subcommand("register", "ORB + RANSAC affine registration of gen onto orig");
    reg->add_option("gen", o.a)->required();
    reg->add_option("orig", o.b)->required();
    reg->add_option("--min-matches", fusion.min_matches)->capture_default_str();
    reg->add_option("--seed", o.pipeline.global_seed)->capture_default_str();

    auto* gc = app.add_subcommand("gradcheck", "Finite-difference check of the analytic loss gradients");
    gc->add_option("--op", o.op, "all|ssi|gm|cosine|aesthetic")
        ->check(CLI::IsMember({"all", "ssi", "gm", "cosine", "aesthetic"}))
        ->capture_default_str();
    gc->add_option("--seed", o.gradcheck_seed)->capture_default_str();
    gc->add_option("--probes", o.probes, "Random probe points per op")->capture_default_str()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitError;
    }

    try {
        if (curate->parsed()) return cmd_curate(o, out);
        if (eval->parsed()) return cmd_eval(o, out);
        if (reward->parsed()) return cmd_reward(o, out);
        if (ssim->parsed()) return cmd_ssim(o, out);
        if (reg->parsed()) return cmd_register(o, out);
        if (gc->parsed()) return cmd_gradcheck(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace depthcur
