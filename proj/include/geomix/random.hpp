#pragma once

#include <cmath>
#include <cstdint>

#include "geomix/common.hpp"

namespace geomix {

// SplitMix64 — used both as a standalone mixer (seed derivation) and as the
// engine behind RngStream. One fixed in-house generator keeps output bytes
// independent of the standard library vendor.
inline u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter scheme: every randomized procedure derives its stream as
// derive_seed(master, purpose, counter). Purposes are small documented
// constants; counters enumerate cells/walkers/samples. Collision-free for our
// purposes since the mixer is a bijection applied to distinct inputs.
inline u64 derive_seed(u64 master, u64 purpose, u64 counter) {
    return splitmix64(splitmix64(master ^ (purpose * 0xd1342543de82ef95ULL)) + counter);
}

// xoshiro256** seeded via splitmix64, per the reference construction.
class RngStream {
  public:
    explicit RngStream(u64 seed) {
        u64 x = seed;
        for (auto& w : s_) w = (x = splitmix64(x));
    }

    u64 next_u64() {
        u64 result = rotl(s_[1] * 5, 7) * 9;
        u64 t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, bound) via rejection.
    u64 next_below(u64 bound) {
        u64 threshold = (-bound) % bound;
        for (;;) {
            u64 x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    double next_normal() {
        // Polar Marsaglia; fine for the few places needing gaussians.
        for (;;) {
            double u = 2.0 * next_double() - 1.0;
            double v = 2.0 * next_double() - 1.0;
            double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    // Poisson: inversion by uniform products for small mean, PTRS
    // (transformed rejection with squeeze, Hormann 1993) for large mean.
    u64 next_poisson(double mean);

  private:
    static u64 rotl(u64 x, int k) { return (x << k) | (x >> (64 - k)); }
    u64 s_[4];
};

}  // namespace geomix
