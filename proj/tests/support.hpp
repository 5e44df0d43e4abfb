/**
 * @file support.hpp
 * @brief Shared fixtures for the test binaries: seeded grid generators,
 *        the synthetic two-texture corpus, temporary directories and a
 *        small process runner for CLI tests.
 */
#pragma once

#include "frd/feature_matrix.hpp"
#include "frd/image.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

namespace frd::test {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
double normal(Rng& rng);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

/// Random grid of one of several flavours (continuous noise, few distinct
/// levels, blocky patches, constant) chosen by `flavour` mod 4.
Grid random_grid(Rng& rng, std::size_t height, std::size_t width, int flavour);

enum class Texture { Blobs, Stripes };

/// One synthetic texture image with values in [0, 1].
Grid texture_image(Texture t, std::uint64_t seed, std::size_t size);

/// `count` images of one texture, ids prefix0000, prefix0001, ...
ImageSet texture_corpus(Texture t, std::size_t count, std::size_t size, std::uint64_t seed, const std::string& prefix);

/// Feature matrix with generic catalog entries and the given values.
FeatureMatrix matrix_from(const Eigen::MatrixXd& values, const std::string& id_prefix = "r");

class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

struct CommandResult {
    int exit_code = -1;
    std::string out;
};

/// Runs a shell command, capturing stdout; stderr is appended when
/// `merge_stderr` is set.
CommandResult run(const std::string& command, bool merge_stderr = false);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// Writes a PNG with raw sample bytes (big-endian for 16-bit samples).
/// `channels` 1 = gray, 2 = gray+alpha, 3 = RGB.
void write_png_samples(const std::filesystem::path& path, std::size_t height, std::size_t width, int bit_depth,
                       int channels, const std::vector<unsigned char>& samples);

}  // namespace frd::test
