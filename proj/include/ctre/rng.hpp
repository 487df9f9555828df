#pragma once

// Seeded random source with explicit state. Draws are derived from raw
// mt19937_64 output rather than std::*_distribution so that sequences are
// identical across standard library implementations. The stream id lets one
// seed drive several independent streams (e.g. waiting times vs magnitudes).

#include <cmath>
#include <cstdint>
#include <random>

namespace ctre {

class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{seed, stream, std::uint64_t{0x9e3779b97f4a7c15ULL}};
        engine_.seed(seq);
    }

    // uniform on [0, 1) with 53-bit resolution
    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    // uniform on the open interval (0, 1)
    double uniform_open() {
        for (;;) {
            const double u = uniform();
            if (u > 0.0) return u;
        }
    }

    double exponential() { return -std::log(uniform_open()); }

    double gumbel() { return -std::log(-std::log(uniform_open())); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace ctre
