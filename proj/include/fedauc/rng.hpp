#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fedauc {

/// splitmix64; used to derive independent stream seeds from a scenario seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(mix_seed(seed, stream));
}

/// Log-uniform positive real over [2^lo_exp, 2^hi_exp].
inline double log_uniform_pow2(std::mt19937_64& rng, double lo_exp, double hi_exp) {
    std::uniform_real_distribution<double> u(lo_exp, hi_exp);
    return std::exp2(u(rng));
}

/// Random multiplier with exactly 32 significant bits, log-uniform binade in
/// [2^lo_exp, 2^hi_exp). 32-bit mantissas keep client-side mask arithmetic
/// exact in doubles (32 mantissa bits + 21 value bits fit in the 53-bit
/// significand).
inline double random_multiplier32(std::mt19937_64& rng, int lo_exp, int hi_exp) {
    std::uniform_int_distribution<int> binade(lo_exp, hi_exp - 1);
    std::uniform_int_distribution<std::uint64_t> mant(1ull << 31, (1ull << 32) - 1);
    int e = binade(rng);
    return std::ldexp(static_cast<double>(mant(rng)), e - 31);
}

inline double laplace(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double x = u(rng);
    return -scale * (x < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::fabs(x));
}

}  // namespace fedauc
