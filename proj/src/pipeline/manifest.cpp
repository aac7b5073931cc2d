#include "depthcur/pipeline/manifest.hpp"

#include "depthcur/error.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>

namespace depthcur {

using nlohmann::json;

std::filesystem::path ManifestEntry::resolve(const std::string& p) const {
    std::filesystem::path q(p);
    return q.is_absolute() ? q : base_dir / q;
}

std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());

    std::vector<ManifestEntry> out;
    std::map<std::string, int> first_line;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        ManifestEntry e;
        try {
            const json j = json::parse(line);
            if (!j.is_object()) throw FormatError(where + ": expected a JSON object");
            e.id = j.at("id").get<std::string>();
            e.depth_source = j.at("depth_source").get<std::string>();
            e.rgb_orig = j.at("rgb_orig").get<std::string>();
            e.rgb_gen = j.at("rgb_gen").get<std::vector<std::string>>();
            if (j.contains("depth_pseudo") && !j["depth_pseudo"].is_null()) {
                e.depth_pseudo = j["depth_pseudo"].get<std::string>();
            }
            e.depth_scale = j.value("depth_scale", 0.001);
            e.seed_tag = j.value("seed_tag", std::int64_t{0});
        } catch (const json::exception& ex) {
            throw FormatError(where + ": " + ex.what());
        }
        if (e.id.empty()) throw FormatError(where + ": empty id");
        if (e.rgb_gen.empty() || e.rgb_gen.size() > kMaxVariants) {
            throw FormatError(where + ": rgb_gen must list 1 to 4 images");
        }
        if (!(e.depth_scale > 0.0)) throw FormatError(where + ": depth_scale must be positive");
        const auto [it, inserted] = first_line.emplace(e.id, lineno);
        if (!inserted) {
            throw FormatError(path.string() + ": duplicate id '" + e.id + "' on lines " +
                              std::to_string(it->second) + " and " + std::to_string(lineno));
        }
        e.base_dir = path.parent_path();
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace depthcur
