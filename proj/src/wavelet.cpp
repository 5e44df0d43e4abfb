#include "frd/wavelet.hpp"

#include "frd/error.hpp"

#include <cmath>
#include <numbers>

namespace frd {

namespace {

// Half-sample symmetric reflection into [0, n).
std::ptrdiff_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) {
    const std::ptrdiff_t period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

struct Kernels {
    std::span<const double> rows;
    std::span<const double> cols;
};

Kernels band_kernels(const WaveletKernel& k, FilterVariant v) {
    switch (v) {
        case FilterVariant::LL: return {k.low, k.low};
        case FilterVariant::LH: return {k.low, k.high};
        case FilterVariant::HL: return {k.high, k.low};
        case FilterVariant::HH: return {k.high, k.high};
        case FilterVariant::Original: break;
    }
    return {};
}

}  // namespace

std::string_view variant_name(FilterVariant v) {
    switch (v) {
        case FilterVariant::Original: return "original";
        case FilterVariant::LL: return "wavelet-LL";
        case FilterVariant::LH: return "wavelet-LH";
        case FilterVariant::HL: return "wavelet-HL";
        case FilterVariant::HH: return "wavelet-HH";
    }
    return "?";
}

std::string_view variant_tag(FilterVariant v) {
    switch (v) {
        case FilterVariant::Original: return "orig";
        case FilterVariant::LL: return "ll";
        case FilterVariant::LH: return "lh";
        case FilterVariant::HL: return "hl";
        case FilterVariant::HH: return "hh";
    }
    return "?";
}

std::optional<FilterVariant> parse_variant_name(std::string_view name) {
    for (FilterVariant v : kAllVariants) {
        if (variant_name(v) == name) return v;
    }
    return std::nullopt;
}

std::optional<FilterVariant> parse_variant_tag(std::string_view tag) {
    for (FilterVariant v : kAllVariants) {
        if (variant_tag(v) == tag) return v;
    }
    return std::nullopt;
}

WaveletKernel WaveletKernel::haar() {
    const double s = 1.0 / std::numbers::sqrt2;
    return {"haar", {s, s}, {s, -s}};
}

// Coiflet-1 decomposition filters as tabulated by PyWavelets.
WaveletKernel WaveletKernel::coif1() {
    return {"coif1",
            {-0.01565572813546454, -0.0727326195128539, 0.38486484686420286, 0.8525720202122554,
             0.3378976624578092, -0.0727326195128539},
            {0.0727326195128539, 0.3378976624578092, -0.8525720202122554, 0.38486484686420286,
             0.0727326195128539, -0.01565572813546454}};
}

void WaveletKernel::validate() const {
    auto check = [this](const std::vector<double>& taps, const char* which) {
        if (taps.empty()) throw Error(ErrorKind::KernelError, name + ": empty " + which + "-pass filter");
        double norm2 = 0.0;
        for (double t : taps) {
            if (!std::isfinite(t)) throw Error(ErrorKind::KernelError, name + ": non-finite tap");
            norm2 += t * t;
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9) {
            throw Error(ErrorKind::KernelError, name + ": " + which + "-pass filter L2 norm is " +
                                                    std::to_string(std::sqrt(norm2)) + ", expected 1");
        }
    };
    check(low, "low");
    check(high, "high");
}

std::optional<WaveletKernel> kernel_by_name(std::string_view name) {
    if (name == "haar") return WaveletKernel::haar();
    if (name == "coif1") return WaveletKernel::coif1();
    return std::nullopt;
}

Grid filter_rows(const Grid& src, std::span<const double> taps) {
    const auto h = src.height();
    const auto w = static_cast<std::ptrdiff_t>(src.width());
    const auto k = static_cast<std::ptrdiff_t>(taps.size());
    const std::ptrdiff_t anchor = (k - 1) / 2;
    Grid out(h, src.width());
    for (std::size_t r = 0; r < h; ++r) {
        for (std::ptrdiff_t c = 0; c < w; ++c) {
            double acc = 0.0;
            for (std::ptrdiff_t t = 0; t < k; ++t) {
                acc += taps[static_cast<std::size_t>(t)] * src(r, static_cast<std::size_t>(reflect(c + t - anchor, w)));
            }
            out(r, static_cast<std::size_t>(c)) = acc;
        }
    }
    return out;
}

Grid filter_columns(const Grid& src, std::span<const double> taps) {
    const auto h = static_cast<std::ptrdiff_t>(src.height());
    const auto w = src.width();
    const auto k = static_cast<std::ptrdiff_t>(taps.size());
    const std::ptrdiff_t anchor = (k - 1) / 2;
    Grid out(src.height(), w);
    for (std::ptrdiff_t r = 0; r < h; ++r) {
        for (std::ptrdiff_t t = 0; t < k; ++t) {
            const double tap = taps[static_cast<std::size_t>(t)];
            const auto sr = static_cast<std::size_t>(reflect(r + t - anchor, h));
            for (std::size_t c = 0; c < w; ++c) out(static_cast<std::size_t>(r), c) += tap * src(sr, c);
        }
    }
    return out;
}

Grid filter_variant(const Grid& img, const WaveletKernel& kernel, FilterVariant variant) {
    if (variant == FilterVariant::Original) return img;
    kernel.validate();
    const Kernels k = band_kernels(kernel, variant);
    return filter_columns(filter_rows(img, k.rows), k.cols);
}

std::vector<FilterBankOutput> filter_bank(const Grid& img, const WaveletKernel& kernel) {
    kernel.validate();
    const Grid low_rows = filter_rows(img, kernel.low);
    const Grid high_rows = filter_rows(img, kernel.high);
    std::vector<FilterBankOutput> out;
    out.reserve(kAllVariants.size());
    out.push_back({FilterVariant::Original, img});
    out.push_back({FilterVariant::LL, filter_columns(low_rows, kernel.low)});
    out.push_back({FilterVariant::LH, filter_columns(low_rows, kernel.high)});
    out.push_back({FilterVariant::HL, filter_columns(high_rows, kernel.low)});
    out.push_back({FilterVariant::HH, filter_columns(high_rows, kernel.high)});
    return out;
}

}  // namespace frd
