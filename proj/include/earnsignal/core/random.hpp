#pragma once

// Portable draws on top of std::mt19937_64. The standard distributions are
// implementation-defined, so they are avoided wherever output must be
// byte-identical across platforms.

#include <cstddef>
#include <cstdint>
#include <random>

namespace earnsignal {

using Rng = std::mt19937_64;

/// Uniform integer in [0, n), n > 0. Rejection sampling, no modulo bias.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod n
    std::uint64_t x = rng();
    while (x < threshold) x = rng();
    return static_cast<std::size_t>(x % bound);
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace earnsignal
