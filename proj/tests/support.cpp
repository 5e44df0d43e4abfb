#include "support.hpp"

#include "frd/catalog.hpp"

#include <png.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace frd::test {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Grid random_grid(Rng& rng, std::size_t height, std::size_t width, int flavour) {
    Grid g(height, width);
    switch (flavour % 4) {
        case 0:
            for (double& v : g.values()) v = uniform(rng);
            break;
        case 1: {
            const int levels = uniform_int(rng, 2, 5);
            for (double& v : g.values()) v = uniform_int(rng, 0, levels - 1) / static_cast<double>(levels - 1);
            break;
        }
        case 2: {
            const std::size_t block = static_cast<std::size_t>(uniform_int(rng, 2, 3));
            std::vector<double> tiles((height / block + 1) * (width / block + 1));
            for (double& t : tiles) t = uniform_int(rng, 0, 3) / 3.0;
            for (std::size_t r = 0; r < height; ++r) {
                for (std::size_t c = 0; c < width; ++c) g(r, c) = tiles[(r / block) * (width / block + 1) + c / block];
            }
            break;
        }
        default: {
            // mostly constant with a few outliers
            const double base = uniform(rng);
            for (double& v : g.values()) v = uniform(rng) < 0.15 ? uniform(rng) : base;
            break;
        }
    }
    return g;
}

Grid texture_image(Texture t, std::uint64_t seed, std::size_t size) {
    Rng rng(seed);
    Grid g(size, size);
    const double n = static_cast<double>(size);
    if (t == Texture::Blobs) {
        struct Bump {
            double r, c, s, a;
        };
        std::array<Bump, 4> bumps{};
        for (auto& b : bumps) b = {uniform(rng, 0, n), uniform(rng, 0, n), uniform(rng, 0.12, 0.3) * n, uniform(rng, 0.3, 0.8)};
        for (std::size_t r = 0; r < size; ++r) {
            for (std::size_t c = 0; c < size; ++c) {
                double v = 0.1;
                for (const auto& b : bumps) {
                    const double d2 = (r - b.r) * (r - b.r) + (c - b.c) * (c - b.c);
                    v += b.a * std::exp(-d2 / (2 * b.s * b.s));
                }
                g(r, c) = v + 0.03 * normal(rng);
            }
        }
    } else {
        const double freq = uniform(rng, 0.15, 0.3);
        const double theta = uniform(rng, 0, std::numbers::pi);
        const double phase = uniform(rng, 0, 2 * std::numbers::pi);
        const double amp = uniform(rng, 0.3, 0.45);
        for (std::size_t r = 0; r < size; ++r) {
            for (std::size_t c = 0; c < size; ++c) {
                const double u = c * std::cos(theta) + r * std::sin(theta);
                g(r, c) = 0.5 + amp * std::sin(2 * std::numbers::pi * freq * u + phase) + 0.03 * normal(rng);
            }
        }
    }
    for (double& v : g.values()) v = std::clamp(v, 0.0, 1.0);
    return g;
}

ImageSet texture_corpus(Texture t, std::size_t count, std::size_t size, std::uint64_t seed, const std::string& prefix) {
    ImageSet set;
    set.name = prefix;
    for (std::size_t i = 0; i < count; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "%s%04zu", prefix.c_str(), i);
        set.images.push_back({id, texture_image(t, seed * 1000003ULL + i, size)});
    }
    return set;
}

FeatureMatrix matrix_from(const Eigen::MatrixXd& values, const std::string& id_prefix) {
    const auto full = FeatureCatalog::full();
    if (values.cols() > static_cast<Eigen::Index>(full.size())) throw std::invalid_argument("too many columns");
    std::vector<CatalogEntry> entries(full.entries().begin(), full.entries().begin() + values.cols());
    FeatureMatrix m{{}, FeatureCatalog(entries), values};
    for (Eigen::Index i = 0; i < values.rows(); ++i) m.ids.push_back(id_prefix + std::to_string(i));
    return m;
}

TempDir::TempDir(const std::string& tag) {
    std::string pattern = (std::filesystem::temp_directory_path() / ("frd-" + tag + "-XXXXXX")).string();
    if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

CommandResult run(const std::string& command, bool merge_stderr) {
    const std::string full = merge_stderr ? command + " 2>&1" : command + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    CommandResult result;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
}

void write_png_samples(const std::filesystem::path& path, std::size_t height, std::size_t width, int bit_depth,
                       int channels, const std::vector<unsigned char>& samples) {
    FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("png write failed");
    }
    const int color = channels == 1 ? PNG_COLOR_TYPE_GRAY : channels == 2 ? PNG_COLOR_TYPE_GRAY_ALPHA : PNG_COLOR_TYPE_RGB;
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth, color,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = width * static_cast<std::size_t>(channels) * static_cast<std::size_t>(bit_depth / 8);
    for (std::size_t r = 0; r < height; ++r) png_write_row(png, samples.data() + r * stride);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

}  // namespace frd::test
