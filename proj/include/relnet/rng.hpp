#pragma once

#include <cstdint>
#include <initializer_list>

namespace relnet::rng {

// splitmix64 output function: bijective 64-bit scrambler.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic stream derivation: child = mix64(parent + (tag+1)*phi64).
// Chaining derive() over a tag tuple such as (run, generation, solution,
// instance) keys an independent stream for every evaluation site, so
// results do not depend on evaluation order or thread count.
inline constexpr std::uint64_t derive(std::uint64_t parent, std::uint64_t tag) {
    return mix64(parent + (tag + 1) * 0x9E3779B97F4A7C15ULL);
}

inline constexpr std::uint64_t derive(std::uint64_t parent,
                                      std::initializer_list<std::uint64_t> tags) {
    for (std::uint64_t t : tags) parent = derive(parent, t);
    return parent;
}

// xoshiro256++ uniform stream, seeded through a splitmix64 expansion.
// Value semantics: copying a Stream forks an identical replay of its
// remaining output.
class Stream {
public:
    explicit constexpr Stream(std::uint64_t seed) : s_{} {
        std::uint64_t sm = seed;
        for (auto& word : s_) {
            sm += 0x9E3779B97F4A7C15ULL;
            word = mix64(sm);
        }
    }

    constexpr std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform double in [0,1) with 53 random bits
    constexpr double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // one draw per call, success with probability p
    constexpr bool bernoulli(double p) { return u01() < p; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

} // namespace relnet::rng
