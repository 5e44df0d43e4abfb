/**
 * @file corruptions.hpp
 * @brief Seeded image degradations with a severity p in [0, 100].
 *
 * p = 0 leaves every image unchanged. Intensities are assumed to be in
 * [0, 1] (maximum intensity 1).
 */
#pragma once

#include "frd/image.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace frd {

enum class CorruptionKind { GaussianNoise, GaussianBlur, RandomSwap, BiasField };

std::string_view corruption_name(CorruptionKind k);
/// "noise", "blur", "swap", "bias".
std::optional<CorruptionKind> parse_corruption(std::string_view name);

inline constexpr std::size_t kSwapPatchSize = 15;
inline constexpr int kBiasFieldOrder = 3;
inline constexpr double kBiasFieldMaxCoefficient = 0.5;

struct CorruptionSpec {
    CorruptionKind kind = CorruptionKind::GaussianNoise;
    double severity = 0.0;
    std::uint64_t seed = 0;
};

/// Kernel size for blur: p/100 * longest side rounded to the nearest odd
/// integer (halves round up).
std::size_t blur_kernel_size(double severity, std::size_t longest_side);

/// Normalised Gaussian taps of odd length k with sigma = k / 6.
std::vector<double> gaussian_taps(std::size_t k);

/// Applies the corruption using the spec seed as-is. ParamError when the
/// severity is outside [0, 100].
Grid apply_corruption(const Grid& img, const CorruptionSpec& spec);

/// Same as apply_corruption with the seed mixed with the image id, so each
/// image of a set receives independent draws.
Image apply_corruption(const Image& img, const CorruptionSpec& spec);

ImageSet apply_corruption(const ImageSet& set, const CorruptionSpec& spec, std::size_t workers = 0);

}  // namespace frd
