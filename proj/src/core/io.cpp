#include "depthcur/core/io.hpp"

#include "depthcur/error.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace fs = std::filesystem;

namespace depthcur {

namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 30;

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

struct PfmData {
    int width = 0;
    int height = 0;
    std::vector<float> samples;  // top-to-bottom rows
};

PfmData read_pfm(const fs::path& path) {
    const std::string bytes = read_all(path);
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        return bytes.substr(start, pos - start);
    };
    const std::string magic = next_token();
    if (magic == "PF") throw FormatError(path.string() + ": color PFM not supported, expected Pf");
    if (magic != "Pf") throw FormatError(path.string() + ": bad PFM magic '" + magic + "'");

    auto parse_int = [&](const std::string& tok, const char* what) {
        long long v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size() || v < 1 ||
            v > std::numeric_limits<int>::max()) {
            throw FormatError(path.string() + ": bad PFM " + what + " '" + tok + "'");
        }
        return static_cast<int>(v);
    };
    PfmData out;
    out.width = parse_int(next_token(), "width");
    out.height = parse_int(next_token(), "height");
    const std::string scale_tok = next_token();
    double scale = 0.0;
    {
        auto [p, ec] = std::from_chars(scale_tok.data(), scale_tok.data() + scale_tok.size(), scale);
        if (ec != std::errc{} || p != scale_tok.data() + scale_tok.size() || scale == 0.0 ||
            !std::isfinite(scale)) {
            throw FormatError(path.string() + ": bad PFM scale '" + scale_tok + "'");
        }
    }
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw FormatError(path.string() + ": truncated PFM header");
    }
    ++pos;  // single whitespace byte terminates the header

    const std::size_t n = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height);
    if (n > kMaxPixels) throw FormatError(path.string() + ": PFM dimensions too large");
    if (bytes.size() - pos < n * 4) throw FormatError(path.string() + ": truncated PFM payload");

    const bool little = scale < 0.0;
    const bool swap = little != (std::endian::native == std::endian::little);
    out.samples.resize(n);
    for (int row = 0; row < out.height; ++row) {
        // Stored bottom-to-top.
        const int dst_row = out.height - 1 - row;
        for (int x = 0; x < out.width; ++x) {
            std::uint32_t raw = 0;
            std::memcpy(&raw, bytes.data() + pos, 4);
            pos += 4;
            if (swap) raw = __builtin_bswap32(raw);
            out.samples[static_cast<std::size_t>(dst_row) * out.width + x] = std::bit_cast<float>(raw);
        }
    }
    return out;
}

void write_pfm(const fs::path& path, int width, int height, const std::vector<float>& samples) {
    std::string bytes = "Pf\n" + std::to_string(width) + " " + std::to_string(height) + "\n-1.0\n";
    const std::size_t header = bytes.size();
    bytes.resize(header + samples.size() * 4);
    std::size_t pos = header;
    for (int row = height - 1; row >= 0; --row) {
        for (int x = 0; x < width; ++x) {
            std::uint32_t raw = std::bit_cast<std::uint32_t>(samples[static_cast<std::size_t>(row) * width + x]);
            if constexpr (std::endian::native == std::endian::big) raw = __builtin_bswap32(raw);
            std::memcpy(bytes.data() + pos, &raw, 4);
            pos += 4;
        }
    }
    write_file_atomic(path, bytes);
}

template <class Field>
std::vector<float> to_samples(const Field& f) {
    std::vector<float> s(f.size(), 0.0f);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.is_valid(i)) s[i] = static_cast<float>(f.values[i]);
    }
    return s;
}

cv::Mat imread_checked(const fs::path& path, int flags) {
    if (!fs::exists(path)) throw IoError("no such file: " + path.string());
    cv::Mat m = cv::imread(path.string(), flags);
    if (m.empty()) throw FormatError("cannot decode image " + path.string());
    return m;
}

void imwrite_atomic(const fs::path& path, const cv::Mat& m) {
    std::vector<unsigned char> buf;
    // Fixed compression level keeps the encoded bytes reproducible.
    if (!cv::imencode(".png", m, buf, {cv::IMWRITE_PNG_COMPRESSION, 6})) {
        throw IoError("cannot encode PNG for " + path.string());
    }
    write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(buf.data()), buf.size()));
}

}  // namespace

DepthFormat depth_format_from_path(const fs::path& path) {
    std::string ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".pfm") return DepthFormat::Pfm;
    if (ext == ".png") return DepthFormat::Png16;
    throw ArgumentError("cannot infer depth format from " + path.string());
}

DepthMap load_depth(const fs::path& path, DepthFormat format, double scale) {
    if (format == DepthFormat::Pfm) {
        const PfmData pfm = read_pfm(path);
        DepthMap d(pfm.width, pfm.height, 0.0, false);
        for (std::size_t i = 0; i < pfm.samples.size(); ++i) {
            const double v = pfm.samples[i];
            if (std::isfinite(v) && v > 0.0) {
                d.values[i] = v;
                d.valid[i] = 1;
            }
        }
        return d;
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ArgumentError("png16 depth scale must be positive");
    }
    const cv::Mat m = imread_checked(path, cv::IMREAD_ANYDEPTH | cv::IMREAD_GRAYSCALE);
    if (m.type() != CV_16UC1) throw FormatError(path.string() + ": expected 16-bit grayscale PNG");
    DepthMap d(m.cols, m.rows, 0.0, false);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint16_t>(y);
        for (int x = 0; x < m.cols; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * m.cols + x;
            if (row[x] != 0) {
                d.values[i] = row[x] * scale;
                d.valid[i] = 1;
            }
        }
    }
    return d;
}

void save_depth_pfm(const DepthMap& depth, const fs::path& path) {
    write_pfm(path, depth.width, depth.height, to_samples(depth));
}

void save_depth_png16(const DepthMap& depth, const fs::path& path, double scale) {
    if (!(scale > 0.0)) throw ArgumentError("png16 depth scale must be positive");
    cv::Mat m(depth.height, depth.width, CV_16UC1, cv::Scalar(0));
    for (int y = 0; y < depth.height; ++y) {
        auto* row = m.ptr<std::uint16_t>(y);
        for (int x = 0; x < depth.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * depth.width + x;
            if (!depth.is_valid(i)) continue;
            const long code = std::lround(depth.values[i] / scale);
            if (code < 1 || code > 65535) {
                throw ArgumentError("depth value out of png16 range at (" + std::to_string(x) +
                                    ", " + std::to_string(y) + ")");
            }
            row[x] = static_cast<std::uint16_t>(code);
        }
    }
    imwrite_atomic(path, m);
}

DisparityMap load_disparity_pfm(const fs::path& path) {
    const PfmData pfm = read_pfm(path);
    DisparityMap d(pfm.width, pfm.height, 0.0, false);
    for (std::size_t i = 0; i < pfm.samples.size(); ++i) {
        const double v = pfm.samples[i];
        if (std::isfinite(v) && v >= 0.0) {
            d.values[i] = v;
            d.valid[i] = 1;
        }
    }
    return d;
}

void save_disparity_pfm(const DisparityMap& disparity, const fs::path& path) {
    auto samples = to_samples(disparity);
    // Invalid disparity has no in-band sentinel other than a non-finite value.
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!disparity.is_valid(i)) samples[i] = std::numeric_limits<float>::quiet_NaN();
    }
    write_pfm(path, disparity.width, disparity.height, samples);
}

void save_mask(const BinaryMask& mask, const fs::path& path) {
    cv::Mat m(mask.height, mask.width, CV_8UC1);
    for (int y = 0; y < mask.height; ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.width; ++x) row[x] = mask.at(x, y) ? 255 : 0;
    }
    imwrite_atomic(path, m);
}

BinaryMask load_mask(const fs::path& path) {
    const cv::Mat m = imread_checked(path, cv::IMREAD_UNCHANGED);
    if (m.type() != CV_8UC1) throw FormatError(path.string() + ": mask must be 8-bit grayscale");
    BinaryMask mask(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) {
            if (row[x] == 255) {
                mask.at(x, y) = 1;
            } else if (row[x] != 0) {
                throw FormatError(path.string() + ": mask value " + std::to_string(row[x]) +
                                  " at (" + std::to_string(x) + ", " + std::to_string(y) +
                                  ") is neither 0 nor 255");
            }
        }
    }
    return mask;
}

RgbImage load_rgb(const fs::path& path) {
    const cv::Mat m = imread_checked(path, cv::IMREAD_COLOR);
    RgbImage img(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* row = m.ptr<cv::Vec3b>(y);
        for (int x = 0; x < m.cols; ++x) {
            img.at(x, y, 0) = row[x][2];
            img.at(x, y, 1) = row[x][1];
            img.at(x, y, 2) = row[x][0];
        }
    }
    return img;
}

void save_rgb(const RgbImage& image, const fs::path& path) {
    cv::Mat m(image.height, image.width, CV_8UC3);
    for (int y = 0; y < image.height; ++y) {
        auto* row = m.ptr<cv::Vec3b>(y);
        for (int x = 0; x < image.width; ++x) {
            row[x] = cv::Vec3b(image.at(x, y, 2), image.at(x, y, 1), image.at(x, y, 0));
        }
    }
    imwrite_atomic(path, m);
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto " + path.string());
    }
}

}  // namespace depthcur
