#include "witnesskit/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <vector>

using witnesskit::Nat;
using witnesskit::RandomStream;

namespace {

// The documented construction, written out independently so the stream
// can never drift away from its spec in the README.
std::uint64_t reference_mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t reference_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t j) {
    const std::uint64_t key = reference_mix64(seed + stream * 0xBF58476D1CE4E5B9ULL);
    return reference_mix64(key + j * 0x9E3779B97F4A7C15ULL);
}

}  // namespace

TEST_CASE("stream words match the documented counter-mode construction") {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
        for (std::uint64_t stream : {0ULL, 1ULL, 977ULL}) {
            RandomStream rng(seed, stream);
            for (std::uint64_t j = 0; j < 16; ++j) {
                REQUIRE(rng.next_u64() == reference_word(seed, stream, j));
            }
        }
    }
}

TEST_CASE("equal seeds replay, different streams do not") {
    RandomStream a(123, 4), b(123, 4), c(123, 5);
    bool all_equal_c = true;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        REQUIRE(va == b.next_u64());
        all_equal_c = all_equal_c && va == c.next_u64();
    }
    REQUIRE_FALSE(all_equal_c);
}

TEST_CASE("below_u64 stays in range and covers small supports") {
    RandomStream rng(7);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.below_u64(13);
        REQUIRE(v < 13);
        seen.insert(v);
    }
    REQUIRE(seen.size() == 13);
    REQUIRE(rng.below_u64(1) == 0);
    REQUIRE_THROWS_AS(rng.below_u64(0), std::domain_error);
}

TEST_CASE("below handles wide bounds") {
    RandomStream rng(99);
    const Nat bound = (Nat(1) << 130) + 12345;
    for (int i = 0; i < 200; ++i) {
        const Nat v = rng.below(bound);
        REQUIRE(v >= 0);
        REQUIRE(v < bound);
    }
    REQUIRE(rng.below(Nat(1)) == 0);
    REQUIRE_THROWS_AS(rng.below(Nat(0)), std::domain_error);

    // A bound one past a limb edge must still be reachable everywhere.
    RandomStream rng2(5);
    std::set<int> buckets;
    for (int i = 0; i < 500; ++i) {
        buckets.insert(static_cast<int>(rng2.below(Nat(5))));
    }
    REQUIRE(buckets.size() == 5);
}
