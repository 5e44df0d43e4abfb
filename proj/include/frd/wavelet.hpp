/**
 * @file wavelet.hpp
 * @brief Single-level undecimated 2D wavelet filter bank.
 *
 * Each sub-band is a separable filtering: the first letter of the band names
 * the kernel run along each row (horizontal direction), the second the kernel
 * run along each column. Filtering is correlation with the taps anchored at
 * offset (K-1)/2:
 *
 *     out[x] = sum_k taps[k] * in[reflect(x + k - (K-1)/2)]
 *
 * with half-sample symmetric reflection (... x1 x0 | x0 x1 ...).
 */
#pragma once

#include "frd/image.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace frd {

enum class FilterVariant { Original, LL, LH, HL, HH };

inline constexpr std::array<FilterVariant, 5> kAllVariants{
    FilterVariant::Original, FilterVariant::LL, FilterVariant::LH, FilterVariant::HL, FilterVariant::HH};

/// "original", "wavelet-LL", ...
std::string_view variant_name(FilterVariant v);
/// Short CLI tag: "orig", "ll", "lh", "hl", "hh".
std::string_view variant_tag(FilterVariant v);
std::optional<FilterVariant> parse_variant_name(std::string_view name);
std::optional<FilterVariant> parse_variant_tag(std::string_view tag);

struct WaveletKernel {
    std::string name;
    std::vector<double> low;
    std::vector<double> high;

    static WaveletKernel haar();
    static WaveletKernel coif1();

    /// KernelError unless both filters are non-empty with unit L2 norm.
    void validate() const;
};

/// "haar" or "coif1"; nullopt otherwise ("none" is handled by the catalog).
std::optional<WaveletKernel> kernel_by_name(std::string_view name);

struct FilterBankOutput {
    FilterVariant variant;
    Grid pixels;
};

/// One-dimensional filtering of each row (horizontal pass).
Grid filter_rows(const Grid& src, std::span<const double> taps);
/// One-dimensional filtering of each column (vertical pass).
Grid filter_columns(const Grid& src, std::span<const double> taps);

/// Original copy followed by LL, LH, HL, HH, all the size of the input.
std::vector<FilterBankOutput> filter_bank(const Grid& img, const WaveletKernel& kernel);

/// Only the requested variant, skipping unneeded passes.
Grid filter_variant(const Grid& img, const WaveletKernel& kernel, FilterVariant variant);

}  // namespace frd
