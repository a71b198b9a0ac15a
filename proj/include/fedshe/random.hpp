#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fedshe/int_wide.hpp"

namespace fedshe {

inline u64 splitmix64(u64 x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed mixer for deriving independent streams (per client, per round, ...).
inline u64 mix_seed(u64 base, u64 a, u64 b = 0, u64 c = 0) {
    u64 s = splitmix64(base ^ 0xA0761D6478BD642Full);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    s = splitmix64(s ^ c);
    return s;
}

// Deterministic pseudorandom stream. mt19937_64 is fully specified by the
// standard, so identical seeds give identical sequences on every platform.
// Single-owner: never share one instance across threads.
class RandomSource {
  public:
    explicit RandomSource(u64 seed) : seed_(seed), gen_(seed) {}

    u64 seed() const { return seed_; }

    u64 next_u64() { return gen_(); }

    // Uniform in [0, bound) by rejection; bound up to 2^128 - 1.
    u128 uniform_below(u128 bound) {
        if (bound == 0) throw std::domain_error("uniform_below: bound must be positive");
        if (bound <= static_cast<u128>(UINT64_MAX)) {
            const u64 b = static_cast<u64>(bound);
            const u64 limit = UINT64_MAX - (UINT64_MAX % b + 1) % b;
            for (;;) {
                const u64 r = next_u64();
                if (r <= limit) return r % b;
            }
        }
        // 2^128 mod bound, computed as (0 - bound) % bound in wrapping arithmetic.
        const u128 rem = (static_cast<u128>(0) - bound) % bound;
        for (;;) {
            const u128 r = (static_cast<u128>(next_u64()) << 64) | next_u64();
            if (r >= rem) return (r - rem) % bound;
        }
    }

    u64 uniform_u64_below(u64 bound) { return static_cast<u64>(uniform_below(bound)); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (deterministic, platform-stable).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform_double();
        } while (u1 <= 0.0);
        u2 = uniform_double();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        have_spare_ = true;
        return mag * std::cos(two_pi * u2);
    }

    RandomSource derive(u64 stream_id) const { return RandomSource(mix_seed(seed_, stream_id)); }

  private:
    u64 seed_;
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// In-place Fisher-Yates; explicit so shuffles are identical across platforms
// (std::shuffle is implementation-defined).
template <typename T>
void deterministic_shuffle(std::vector<T>& v, RandomSource& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_u64_below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace fedshe
