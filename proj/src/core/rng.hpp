#pragma once

#include <cstdint>

#include "core/vec.hpp"

namespace stlshield {

// splitmix64, used for seeding and for deriving per-episode streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** with hand-rolled uniform helpers. std::uniform_real_distribution
// is implementation-defined, so streams would not be portable across stdlibs.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t uniform_index(std::uint64_t n) { return n ? next_u64() % n : 0; }

    // Uniform over the closed disk of the given radius.
    Vec2 uniform_disk(double radius) {
        double r = radius * std::sqrt(uniform());
        double theta = uniform() * 6.283185307179586476925286766559;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    // Standard normal via Box-Muller (single value; no caching to keep the
    // stream position deterministic and easy to reason about).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Deterministic derived stream, independent of the parent's future output.
    Rng fork(std::uint64_t salt) {
        std::uint64_t s = next_u64() ^ (salt * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
        return Rng(s);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t state_[4] = {};
};

// Stateless per-episode seed derivation from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL);
    return splitmix64(s);
}

}  // namespace stlshield
