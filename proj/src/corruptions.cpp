#include "frd/corruptions.hpp"

#include "frd/error.hpp"
#include "frd/parallel.hpp"
#include "frd/random.hpp"
#include "frd/wavelet.hpp"

#include <algorithm>
#include <cmath>

namespace frd {

namespace {

// Streams keep the draws of different corruption kinds independent.
enum Stream : std::uint64_t { kNoiseStream = 1, kSwapStream = 2, kBiasStream = 3 };

Grid gaussian_noise(const Grid& img, double severity, std::uint64_t seed) {
    const CounterRng rng(seed, kNoiseStream);
    const double amplitude = severity / 100.0;
    Grid out = img;
    auto values = out.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = std::clamp(values[i] + amplitude * rng.normal(i), 0.0, 1.0);
    }
    return out;
}

Grid gaussian_blur(const Grid& img, double severity) {
    const std::size_t k = blur_kernel_size(severity, std::max(img.height(), img.width()));
    if (k < 3) return img;
    const std::vector<double> taps = gaussian_taps(k);
    return filter_columns(filter_rows(img, taps), taps);
}

Grid random_swap(const Grid& img, double severity, std::uint64_t seed) {
    const auto swaps = static_cast<std::uint64_t>(std::llround(severity));
    const std::size_t patch = std::min({kSwapPatchSize, img.height(), img.width()});
    const std::uint64_t rows = img.height() - patch + 1;
    const std::uint64_t cols = img.width() - patch + 1;
    const CounterRng rng(seed, kSwapStream);
    Grid out = img;
    for (std::uint64_t s = 0; s < swaps; ++s) {
        const std::size_t r1 = rng.below(4 * s, rows);
        const std::size_t c1 = rng.below(4 * s + 1, cols);
        const std::size_t r2 = rng.below(4 * s + 2, rows);
        const std::size_t c2 = rng.below(4 * s + 3, cols);
        // Copy both patches before writing so overlapping patches swap cleanly.
        std::vector<double> first(patch * patch), second(patch * patch);
        for (std::size_t r = 0; r < patch; ++r) {
            for (std::size_t c = 0; c < patch; ++c) {
                first[r * patch + c] = out(r1 + r, c1 + c);
                second[r * patch + c] = out(r2 + r, c2 + c);
            }
        }
        for (std::size_t r = 0; r < patch; ++r) {
            for (std::size_t c = 0; c < patch; ++c) out(r1 + r, c1 + c) = second[r * patch + c];
        }
        for (std::size_t r = 0; r < patch; ++r) {
            for (std::size_t c = 0; c < patch; ++c) out(r2 + r, c2 + c) = first[r * patch + c];
        }
    }
    return out;
}

// Field exp(sum_{i+j<=3} c_ij x^i y^j) over coordinates scaled to [-1, 1],
// coefficients uniform in [-c, c], rescaled to unit mean.
Grid bias_field(const Grid& img, double severity, std::uint64_t seed) {
    const double c = severity / 100.0 * kBiasFieldMaxCoefficient;
    const CounterRng rng(seed, kBiasStream);
    std::vector<double> coeffs;
    for (int i = 0; i <= kBiasFieldOrder; ++i) {
        for (int j = 0; j + i <= kBiasFieldOrder; ++j) {
            coeffs.push_back((2.0 * rng.uniform(coeffs.size()) - 1.0) * c);
        }
    }
    const auto coord = [](std::size_t k, std::size_t n) {
        return n > 1 ? 2.0 * static_cast<double>(k) / static_cast<double>(n - 1) - 1.0 : 0.0;
    };
    Grid field(img.height(), img.width());
    double sum = 0.0;
    for (std::size_t r = 0; r < img.height(); ++r) {
        const double y = coord(r, img.height());
        for (std::size_t col = 0; col < img.width(); ++col) {
            const double x = coord(col, img.width());
            double poly = 0.0;
            std::size_t n = 0;
            for (int i = 0; i <= kBiasFieldOrder; ++i) {
                for (int j = 0; j + i <= kBiasFieldOrder; ++j) poly += coeffs[n++] * std::pow(x, i) * std::pow(y, j);
            }
            field(r, col) = std::exp(poly);
            sum += field(r, col);
        }
    }
    const double mean = sum / static_cast<double>(field.size());
    Grid out = img;
    auto values = out.values();
    const auto f = field.values();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::clamp(values[i] * f[i] / mean, 0.0, 1.0);
    return out;
}

}  // namespace

std::string_view corruption_name(CorruptionKind k) {
    switch (k) {
        case CorruptionKind::GaussianNoise: return "noise";
        case CorruptionKind::GaussianBlur: return "blur";
        case CorruptionKind::RandomSwap: return "swap";
        case CorruptionKind::BiasField: return "bias";
    }
    return "?";
}

std::optional<CorruptionKind> parse_corruption(std::string_view name) {
    for (CorruptionKind k : {CorruptionKind::GaussianNoise, CorruptionKind::GaussianBlur, CorruptionKind::RandomSwap,
                             CorruptionKind::BiasField}) {
        if (corruption_name(k) == name) return k;
    }
    return std::nullopt;
}

std::size_t blur_kernel_size(double severity, std::size_t longest_side) {
    const double raw = severity / 100.0 * static_cast<double>(longest_side);
    const double odd = 2.0 * std::floor((raw - 1.0) / 2.0 + 0.5) + 1.0;
    return odd < 1.0 ? 1 : static_cast<std::size_t>(odd);
}

std::vector<double> gaussian_taps(std::size_t k) {
    if (k % 2 == 0) throw Error(ErrorKind::ParamError, "Gaussian kernel size must be odd");
    const double sigma = static_cast<double>(k) / 6.0;
    const auto half = static_cast<double>(k / 2);
    std::vector<double> taps(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double x = static_cast<double>(i) - half;
        taps[i] = std::exp(-x * x / (2.0 * sigma * sigma));
        sum += taps[i];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

Grid apply_corruption(const Grid& img, const CorruptionSpec& spec) {
    if (!(spec.severity >= 0.0 && spec.severity <= 100.0)) {
        throw Error(ErrorKind::ParamError, "severity must be in [0, 100], got " + std::to_string(spec.severity));
    }
    if (spec.severity == 0.0 || img.empty()) return img;
    switch (spec.kind) {
        case CorruptionKind::GaussianNoise: return gaussian_noise(img, spec.severity, spec.seed);
        case CorruptionKind::GaussianBlur: return gaussian_blur(img, spec.severity);
        case CorruptionKind::RandomSwap: return random_swap(img, spec.severity, spec.seed);
        case CorruptionKind::BiasField: return bias_field(img, spec.severity, spec.seed);
    }
    return img;
}

Image apply_corruption(const Image& img, const CorruptionSpec& spec) {
    CorruptionSpec per_image = spec;
    per_image.seed = spec.seed ^ fnv1a64(img.id);
    return {img.id, apply_corruption(img.pixels, per_image)};
}

ImageSet apply_corruption(const ImageSet& set, const CorruptionSpec& spec, std::size_t workers) {
    ImageSet out;
    out.name = set.name;
    out.images.resize(set.size());
    parallel_for(set.size(), workers, [&](std::size_t i) { out.images[i] = apply_corruption(set.images[i], spec); });
    return out;
}

}  // namespace frd
