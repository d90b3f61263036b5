#pragma once

#include <cstdint>
#include <random>

namespace toponym {

// Deterministic RNG used everywhere randomness is needed. std::mt19937_64 is
// bit-exact across platforms; the distribution mapping is done by hand because
// std::uniform_real_distribution / std::normal_distribution are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n > 0. Rejection-free modulo bias is
    // negligible for the small n used here, but keep it exact anyway.
    std::uint64_t uniform_index(std::uint64_t n);

    // Standard normal via Box-Muller. Consumes two uniforms per pair; the
    // spare is cached.
    double normal();

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace toponym
