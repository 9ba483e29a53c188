#pragma once

// Counter-free splittable RNG. Ensemble sample k draws from a SplitMix64
// stream seeded with mix(seed + k * golden); workers can therefore generate
// any sample independently and reductions stay order-deterministic.

#include <cmath>
#include <cstdint>

#include "hfgyro/linalg.hpp"

namespace hfgyro {

class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in (0,1]
    double uniform() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    // standard normal via Box-Muller (pairs cached)
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = two_pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline uint64_t sample_seed(uint64_t scenario_seed, uint64_t sample_index) {
    SplitMix64 g(scenario_seed + sample_index * 0x9E3779B97F4A7C15ull);
    return g.next();
}

}  // namespace hfgyro
