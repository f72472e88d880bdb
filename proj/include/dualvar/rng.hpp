#pragma once

#include <cstdint>
#include <cmath>

namespace dualvar {

/// Deterministic 64-bit xorshift* generator.
///
/// Every random draw in the code base flows through one instance of this
/// struct, seeded once from the run configuration, so reruns with the same
/// seed produce byte-identical outputs. The algorithm is Marsaglia's
/// xorshift64 with the multiplicative finalizer (shifts 12/25/27, multiplier
/// 0x2545F4914F6CDD1D); the seed is first mixed through a splitmix64 step so
/// seed 0 is usable.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) {
        // splitmix64 scramble so that small seeds do not start in a weak state
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        state = z ^ (z >> 31);
        if (state == 0) state = 0x9E3779B97F4A7C15ull;
    }

    std::uint64_t next_u64() {
        std::uint64_t x = state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state = x;
        return x * 0x2545F4914F6CDD1Dull;
    }

    /// uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// uniform in [a, b)
    double uniform_in(double a, double b) { return a + (b - a) * uniform(); }

    /// standard normal via Box-Muller; second value of each pair is cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double two_pi = 6.283185307179586476925286766559;
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

  private:
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace dualvar
