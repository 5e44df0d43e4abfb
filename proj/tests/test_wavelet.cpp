#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "frd/error.hpp"
#include "frd/wavelet.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <cmath>

using namespace frd;
using frd::test::Rng;

namespace {

double max_abs_diff(const Grid& a, const Grid& b) {
    REQUIRE(a.height() == b.height());
    REQUIRE(a.width() == b.width());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

double energy(const Grid& g) {
    double e = 0.0;
    for (double v : g.values()) e += v * v;
    return e;
}

struct Bands {
    std::vector<double> rows, cols;
};

Bands taps_for(const WaveletKernel& k, FilterVariant v) {
    switch (v) {
        case FilterVariant::LL: return {k.low, k.low};
        case FilterVariant::LH: return {k.low, k.high};
        case FilterVariant::HL: return {k.high, k.low};
        case FilterVariant::HH: return {k.high, k.high};
        default: return {{1.0}, {1.0}};
    }
}

}  // namespace

TEST_CASE("variant names round trip") {
    for (FilterVariant v : kAllVariants) {
        CHECK(parse_variant_name(variant_name(v)) == v);
        CHECK(parse_variant_tag(variant_tag(v)) == v);
    }
    CHECK(variant_name(FilterVariant::LH) == "wavelet-LH");
    CHECK(!parse_variant_tag("xx"));
}

TEST_CASE("constant image with Haar") {
    const double c = 0.37;
    const Grid g(6, 5, c);
    const auto k = WaveletKernel::haar();
    const double low_sum = k.low[0] + k.low[1];
    for (const auto& out : filter_bank(g, k)) {
        for (double v : out.pixels.values()) {
            if (out.variant == FilterVariant::Original) {
                CHECK(v == c);
            } else if (out.variant == FilterVariant::LL) {
                CHECK(v == doctest::Approx(c * low_sum * low_sum).epsilon(1e-14));
            } else {
                CHECK(std::abs(v) <= 1e-15);
            }
        }
    }
}

TEST_CASE("vertical step edge: HL response sits next to the edge") {
    Grid g(6, 8);
    for (std::size_t r = 0; r < 6; ++r) {
        for (std::size_t c = 4; c < 8; ++c) g(r, c) = 1.0;
    }
    const auto k = WaveletKernel::haar();
    const Grid hl = filter_variant(g, k, FilterVariant::HL);
    // 1D oracle along a row, then the low-pass along columns of a
    // row-constant image just scales by sum(low)
    const double low_sum = k.low[0] + k.low[1];
    std::vector<double> row(8);
    for (std::size_t c = 0; c < 8; ++c) row[c] = g(0, c);
    for (std::size_t c = 0; c < 8; ++c) {
        const double next = c + 1 < 8 ? row[c + 1] : row[7];
        const double want = (k.high[0] * row[c] + k.high[1] * next) * low_sum;
        for (std::size_t r = 0; r < 6; ++r) {
            CHECK(hl(r, c) == doctest::Approx(want).epsilon(1e-14));
            if (c != 3 && c != 4) CHECK(std::abs(hl(r, c)) <= 1e-15);
        }
    }
    CHECK(std::abs(hl(0, 3)) > 0.5);
}

TEST_CASE("filter bank equals dense 2D correlation") {
    Rng rng(8);
    for (const auto& kernel : {WaveletKernel::haar(), WaveletKernel::coif1()}) {
        for (int rep = 0; rep < 10; ++rep) {
            const Grid g = test::random_grid(rng, 8, 8, 0);
            double bank_energy = 0.0, oracle_energy = 0.0;
            for (const auto& out : filter_bank(g, kernel)) {
                if (out.variant == FilterVariant::Original) continue;
                const Bands b = taps_for(kernel, out.variant);
                const Grid want = oracle::dense_separable(g, b.rows, b.cols);
                CAPTURE(variant_name(out.variant));
                CHECK(max_abs_diff(out.pixels, want) <= 1e-12);
                bank_energy += energy(out.pixels);
                oracle_energy += energy(want);
            }
            CHECK(std::abs(bank_energy - oracle_energy) <= 1e-9);
        }
    }
}

TEST_CASE("non-square and tiny grids reflect correctly") {
    Rng rng(9);
    const auto k = WaveletKernel::coif1();
    for (auto [h, w] : {std::pair{1u, 7u}, std::pair{3u, 2u}, std::pair{5u, 11u}}) {
        const Grid g = test::random_grid(rng, h, w, 0);
        for (FilterVariant v : {FilterVariant::LH, FilterVariant::HH}) {
            const Bands b = taps_for(k, v);
            CHECK(max_abs_diff(filter_variant(g, k, v), oracle::dense_separable(g, b.rows, b.cols)) <= 1e-12);
        }
    }
}

TEST_CASE("filter bank is linear") {
    Rng rng(10);
    const auto k = WaveletKernel::haar();
    for (int rep = 0; rep < 100; ++rep) {
        const Grid x = test::random_grid(rng, 7, 6, 0);
        const Grid y = test::random_grid(rng, 7, 6, 0);
        const double a = test::uniform(rng, -3, 3), b = test::uniform(rng, -3, 3);
        Grid z(7, 6);
        for (std::size_t i = 0; i < z.size(); ++i) z.values()[i] = a * x.values()[i] + b * y.values()[i];
        const auto fx = filter_bank(x, k), fy = filter_bank(y, k), fz = filter_bank(z, k);
        for (std::size_t v = 0; v < fz.size(); ++v) {
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double want = a * fx[v].pixels.values()[i] + b * fy[v].pixels.values()[i];
                CHECK(std::abs(fz[v].pixels.values()[i] - want) <= 1e-12);
            }
        }
    }
}

TEST_CASE("kernel validation") {
    CHECK_NOTHROW(WaveletKernel::haar().validate());
    CHECK_NOTHROW(WaveletKernel::coif1().validate());
    WaveletKernel bad{"bad", {0.5, 0.5}, {0.5, -0.5}};
    try {
        bad.validate();
        FAIL("expected KernelError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::KernelError);
    }
    CHECK_THROWS_AS(filter_bank(Grid(4, 4, 1.0), bad), Error);
    CHECK(kernel_by_name("haar").has_value());
    CHECK(!kernel_by_name("db4").has_value());
}
