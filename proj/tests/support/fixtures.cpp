#include "fixtures.hpp"

#include "depthcur/core/io.hpp"
#include "depthcur/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace depthcur::testing {

RgbImage textured_image(int width, int height, std::uint64_t seed) {
    Rng rng(seed);
    RgbImage img(width, height);
    const double c0[3] = {40.0 + 60.0 * uniform_unit(rng), 40.0 + 60.0 * uniform_unit(rng), 40.0 + 60.0 * uniform_unit(rng)};
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < 3; ++c) {
                const double v = c0[c] + 60.0 * x / width + 40.0 * y / height * (c == 1 ? -1.0 : 1.0);
                img.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
            }
        }
    }
    const int shapes = std::max(40, width * height / 1200);
    for (int s = 0; s < shapes; ++s) {
        const int w = 6 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(std::max(8, width / 8))));
        const int h = 6 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(std::max(8, height / 8))));
        const int x0 = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(width)));
        const int y0 = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(height)));
        const bool disc = uniform_index(rng, 3) == 0;
        std::uint8_t col[3];
        for (auto& c : col) c = static_cast<std::uint8_t>(uniform_index(rng, 256));
        for (int y = y0; y < std::min(height, y0 + h); ++y) {
            for (int x = x0; x < std::min(width, x0 + w); ++x) {
                if (disc) {
                    const double dx = (x - x0 - w / 2.0) / (w / 2.0);
                    const double dy = (y - y0 - h / 2.0) / (h / 2.0);
                    if (dx * dx + dy * dy > 1.0) continue;
                }
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = col[c];
            }
        }
    }
    return img;
}

RgbImage noise_image(int width, int height, std::uint64_t seed) {
    Rng rng(seed);
    RgbImage img(width, height);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(uniform_index(rng, 256));
    return img;
}

RgbImage shifted(const RgbImage& img, int dx, int dy, std::uint8_t fill) {
    RgbImage out(img.width, img.height);
    std::fill(out.data.begin(), out.data.end(), fill);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const int sx = x - dx;
            const int sy = y - dy;
            if (sx < 0 || sy < 0 || sx >= img.width || sy >= img.height) continue;
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(sx, sy, c);
        }
    }
    return out;
}

RgbImage left_half_noise(const RgbImage& img, std::uint64_t seed) {
    RgbImage out = img;
    const RgbImage noise = noise_image(img.width, img.height, seed);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width / 2; ++x) {
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = noise.at(x, y, c);
        }
    }
    return out;
}

GrayImage random_gray(int width, int height, std::uint64_t seed) {
    Rng rng(seed);
    GrayImage g(width, height);
    for (auto& v : g.data) v = 255.0 * uniform_unit(rng);
    return g;
}

DepthMap synthetic_depth(int width, int height, std::uint64_t seed) {
    Rng rng(seed);
    DepthMap d(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) d.at(x, y) = 2.0 + 3.0 * y / height + 0.5 * x / width;
    }
    for (int s = 0; s < 10; ++s) {
        const int x0 = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(width)));
        const int y0 = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(height)));
        const double off = -1.0 + 1.5 * uniform_unit(rng);
        for (int y = y0; y < std::min(height, y0 + height / 5); ++y) {
            for (int x = x0; x < std::min(width, x0 + width / 5); ++x) d.at(x, y) = std::max(0.5, d.at(x, y) + off);
        }
    }
    // Round-trip exactly through float storage.
    for (auto& v : d.values) v = static_cast<float>(v);
    return d;
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("depthcur-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string write_entry(const std::filesystem::path& dir, const std::string& id, int width, int height,
                        std::uint64_t seed, GenKind kind, int variants) {
    const RgbImage orig = textured_image(width, height, seed);
    save_depth_pfm(synthetic_depth(width, height, seed + 1), dir / (id + "_depth.pfm"));
    save_rgb(orig, dir / (id + "_orig.png"));
    nlohmann::ordered_json j;
    j["id"] = id;
    j["depth_source"] = id + "_depth.pfm";
    j["rgb_orig"] = id + "_orig.png";
    j["rgb_gen"] = nlohmann::json::array();
    for (int v = 0; v < variants; ++v) {
        RgbImage gen;
        switch (kind) {
            case GenKind::Same: gen = orig; break;
            case GenKind::Noise: gen = noise_image(width, height, seed + 100 + static_cast<std::uint64_t>(v)); break;
            case GenKind::Shifted: gen = shifted(orig, 2 + v, 1, 128); break;
            case GenKind::HalfNoise: gen = left_half_noise(orig, seed + 200 + static_cast<std::uint64_t>(v)); break;
        }
        const std::string name = id + "_gen" + std::to_string(v) + ".png";
        save_rgb(gen, dir / name);
        j["rgb_gen"].push_back(name);
    }
    j["depth_pseudo"] = id + "_pseudo.pfm";
    j["seed_tag"] = static_cast<std::int64_t>(seed);
    return j.dump();
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace depthcur::testing
