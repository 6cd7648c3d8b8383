#pragma once

// Internal seed derivation and portable random primitives. Everything random
// in the library flows through these so that a run is reproducible from one
// root seed regardless of platform or standard-library version
// (std::*_distribution would be implementation-defined).

#include <cmath>
#include <cstdint>
#include <random>

namespace ledet::detail {

// splitmix64 finalizer; derives independent sub-seeds from (seed, salt).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); modulo bias is irrelevant at our scales.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    // Box-Muller; one value per call keeps the state trivially reproducible.
    double normal(double mean, double sigma) {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ledet::detail
