#pragma once

#include "witnesskit/nat.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace witnesskit {

// Deterministic counter-mode generator. Every random draw in this project
// comes from one of these streams, so a (seed, stream) pair pins the full
// run on any platform. The construction (also documented in the README):
//
//   mix64(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//              z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//              return z ^ (z >> 31)            (the SplitMix64 finalizer)
//
//   key     = mix64(seed + stream * 0xBF58476D1CE4E5B9)
//   word(j) = mix64(key + j * 0x9E3779B97F4A7C15)     for j = 0, 1, 2, ...
//
// with all arithmetic mod 2^64. Derived draws:
//
//   below_u64(b): w = smallest width with 2^w >= b; repeat x = next word
//                 masked to w bits until x < b. below_u64(1) = 0, no draw.
//   below(b):     same over 64-bit limbs, least significant limb first,
//                 top limb masked to bit_length(b - 1) bits.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(seed + stream * 0xBF58476D1CE4E5B9ULL)) {}

    std::uint64_t next_u64() { return mix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL); }

    // Uniform value in [0, bound).
    std::uint64_t below_u64(std::uint64_t bound) {
        if (bound == 0) throw std::domain_error("RandomStream::below_u64: bound must be positive");
        if (bound == 1) return 0;
        const unsigned w = width_of(bound - 1);
        const std::uint64_t mask = (w == 64) ? ~0ULL : ((1ULL << w) - 1);
        for (;;) {
            const std::uint64_t x = next_u64() & mask;
            if (x < bound) return x;
        }
    }

    // Uniform Nat in [0, bound).
    Nat below(const Nat& bound) {
        if (bound <= 0) throw std::domain_error("RandomStream::below: bound must be positive");
        if (bound == 1) return 0;
        const std::size_t bits = bit_length(bound - 1);
        const std::size_t limbs = (bits + 63) / 64;
        const Nat mask = (Nat(1) << bits) - 1;
        for (;;) {
            Nat x = 0;
            for (std::size_t t = 0; t < limbs; ++t) {
                x |= Nat(next_u64()) << (64 * t);
            }
            x &= mask;
            if (x < bound) return x;
        }
    }

    // Raw 64-bit words, least significant limb first; used for bit vectors.
    std::vector<std::uint64_t> next_words(std::size_t count) {
        std::vector<std::uint64_t> out(count);
        for (auto& w : out) w = next_u64();
        return out;
    }

  private:
    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static unsigned width_of(std::uint64_t x) {
        unsigned w = 0;
        while (x != 0) {
            ++w;
            x >>= 1;
        }
        return w;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace witnesskit
