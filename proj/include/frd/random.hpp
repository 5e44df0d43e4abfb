/**
 * @file random.hpp
 * @brief Counter-based random numbers reproducible across platforms.
 *
 * Draw n of stream (seed, stream) is splitmix64(key + (n + 1) * 0x9E3779B97F4A7C15)
 * where key = splitmix64(seed ^ splitmix64(stream)). Uniforms take the top
 * 53 bits; normals use the cosine branch of Box-Muller on two consecutive
 * uniforms. No state beyond the counter, so any draw can be computed
 * independently of the others.
 */
#pragma once

#include <cstdint>
#include <string_view>

namespace frd {

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view text);

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t bits(std::uint64_t counter) const;
    /// Uniform in [0, 1).
    double uniform(std::uint64_t counter) const;
    /// Uniform in (0, 1].
    double uniform_open0(std::uint64_t counter) const;
    /// Standard normal from draws 2*counter and 2*counter+1.
    double normal(std::uint64_t counter) const;
    /// Uniform integer in [0, n) (n > 0), by multiply-shift on 64 bits.
    std::uint64_t below(std::uint64_t counter, std::uint64_t n) const;

private:
    std::uint64_t key_;
};

}  // namespace frd
