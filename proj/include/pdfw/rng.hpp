#pragma once

#include <array>
#include <cstdint>

namespace pdfw {

// Deterministic cross-platform RNG: xoshiro256++ seeded through splitmix64.
// Standard-library distributions are implementation-defined, so every draw
// used by the library goes through this generator.
struct Rng {
    std::array<std::uint64_t, 4> s{};

    static std::uint64_t splitmix64(std::uint64_t& state) {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static Rng from_seed(std::uint64_t seed) {
        Rng r;
        std::uint64_t sm = seed;
        for (auto& w : r.s) w = splitmix64(sm);
        return r;
    }

    // Independent substream `id` of a base seed (state draws, alpha draws, ...).
    static Rng stream(std::uint64_t seed, std::uint64_t id) {
        return from_seed(seed + id * 0xD1B54A32D192ED03ULL);
    }

    // Derives a fresh seed value, used to decorrelate Monte-Carlo replicates.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        std::uint64_t sm = seed ^ (salt * 0x9E3779B97F4A7C15ULL);
        return splitmix64(sm);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform index in {0, ..., n-1}; n is far below 2^53 at desk scale.
    long long next_index(long long n) {
        const auto k = static_cast<long long>(next_unit() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }
};

}  // namespace pdfw
