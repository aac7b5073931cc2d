#include "depthcur/eval/report.hpp"

#include "depthcur/core/io.hpp"
#include "depthcur/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace depthcur {

using nlohmann::json;

Report aggregate(std::vector<SampleMetrics> samples, const EvalConfig& cfg) {
    if (samples.empty()) throw ArgumentError("aggregate: no samples");
    std::stable_sort(samples.begin(), samples.end(),
                     [](const SampleMetrics& a, const SampleMetrics& b) { return a.id < b.id; });
    Report r;
    r.config = cfg;
    for (const auto& s : samples) {
        r.absrel += s.absrel;
        r.delta1 += s.delta1;
        r.rmse += s.rmse;
    }
    const double n = static_cast<double>(samples.size());
    r.absrel /= n;
    r.delta1 /= n;
    r.rmse /= n;
    r.samples = std::move(samples);
    return r;
}

std::string report_to_json(const Report& report) {
    json doc;
    doc["config"] = {{"delta_threshold", report.config.delta_threshold},
                     {"disparity_floor", report.config.disparity_floor},
                     {"max_depth", report.config.max_depth ? json(*report.config.max_depth) : json(nullptr)}};
    doc["samples"] = json::array();
    for (const auto& s : report.samples) {
        doc["samples"].push_back({{"id", s.id},
                                  {"absrel", s.absrel},
                                  {"delta1", s.delta1},
                                  {"rmse", s.rmse},
                                  {"valid_pixels", s.valid_pixels}});
    }
    doc["aggregate"] = {{"absrel", report.absrel}, {"delta1", report.delta1}, {"rmse", report.rmse}};
    doc["version"] = report.version;
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const Report& report) {
    std::ostringstream out;
    out.precision(17);
    out << "id,absrel,delta1,rmse,valid_pixels\n";
    for (const auto& s : report.samples) {
        std::string id = s.id;
        if (id.find_first_of(",\"\n") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : id) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            id = quoted + "\"";
        }
        out << id << ',' << s.absrel << ',' << s.delta1 << ',' << s.rmse << ',' << s.valid_pixels << '\n';
    }
    return out.str();
}

std::vector<EvalEntry> parse_eval_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path q(p);
        return q.is_absolute() ? q : base / q;
    };
    std::vector<EvalEntry> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            EvalEntry e;
            e.id = j.at("id").get<std::string>();
            e.pred_disparity = resolve(j.at("pred_disparity").get<std::string>());
            e.gt_depth = resolve(j.at("gt_depth").get<std::string>());
            e.gt_scale = j.value("gt_scale", 1.0);
            out.push_back(std::move(e));
        } catch (const json::exception& ex) {
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return out;
}

Report evaluate_manifest(std::span<const EvalEntry> entries, const EvalConfig& cfg) {
    std::vector<SampleMetrics> samples;
    samples.reserve(entries.size());
    for (const auto& e : entries) {
        const DisparityMap pred = load_disparity_pfm(e.pred_disparity);
        const DepthMap gt = load_depth(e.gt_depth, depth_format_from_path(e.gt_depth), e.gt_scale);
        samples.push_back(evaluate_sample(pred, gt, cfg, e.id));
    }
    return aggregate(std::move(samples), cfg);
}

}  // namespace depthcur
