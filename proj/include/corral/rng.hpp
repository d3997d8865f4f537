#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace corral {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based split: child `index` of stream `stream` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t stream = 0) noexcept {
    return splitmix64(splitmix64(master ^ splitmix64(index)) + stream * 0xD1B54A32D192ED03ULL);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(double p, Rng& rng) {
    return uniform01(rng) < p;
}

/// Inverse-CDF draw from a probability vector.
inline std::size_t sample_index(std::span<const double> p, Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) {
            return i;
        }
    }
    // Rounding left a sliver above the cumulative sum; take the last non-zero entry.
    for (std::size_t i = p.size(); i-- > 0;) {
        if (p[i] > 0.0) {
            return i;
        }
    }
    return p.size() - 1;
}

inline double sample_beta(double a, double b, Rng& rng) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
}

}  // namespace corral
