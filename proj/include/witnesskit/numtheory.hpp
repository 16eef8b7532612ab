#pragma once

#include "witnesskit/nat.hpp"
#include "witnesskit/rng.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace witnesskit {

// Asking for a square root of a value that has none.
struct NonResidue : std::domain_error {
    NonResidue(Nat value, Nat modulus)
        : std::domain_error("no square root of " + value.str() + " modulo " + modulus.str()),
          value(std::move(value)),
          modulus(std::move(modulus)) {}
    Nat value;
    Nat modulus;
};

// A quadratic input shared a factor with the modulus. This is a success
// path for the factoring reduction, not a failure; the factor rides along.
struct FactorLeak : std::runtime_error {
    explicit FactorLeak(Nat factor)
        : std::runtime_error("input shares factor " + factor.str() + " with the modulus"),
          factor(std::move(factor)) {}
    Nat factor;
};

inline Nat mod_pow(const Nat& base, const Nat& exp, const Nat& modulus) {
    if (modulus == 0) throw std::domain_error("mod_pow: modulus must be positive");
    return boost::multiprecision::powm(base, exp, modulus);
}

inline Nat gcd(const Nat& a, const Nat& b) { return boost::multiprecision::gcd(a, b); }

namespace detail {

// Extended Euclid: returns (g, x) with a*x = g (mod b), 0 <= x < b/g.
inline std::pair<Nat, Nat> mod_inverse_pair(const Nat& a, const Nat& b) {
    Nat old_r = a % b, r = b;
    Nat old_s = 1, s = 0;
    while (r != 0) {
        const Nat quotient = old_r / r;
        Nat tmp = old_r - quotient * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quotient * s;
        old_s = s;
        s = tmp;
    }
    Nat x = old_s % b;
    if (x < 0) x += b;
    return {old_r, x};
}

inline bool miller_rabin_round(const Nat& n, const Nat& witness, const Nat& odd_part, unsigned two_exp) {
    Nat x = mod_pow(witness, odd_part, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned i = 1; i < two_exp; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace detail

// Deterministic trial division below 2^16, Miller-Rabin above. Witnesses
// are drawn from a stream keyed by the low limb of n, so the verdict for a
// given n never changes between runs.
inline bool is_probable_prime(const Nat& n, unsigned rounds = 32) {
    if (rounds < 1) throw std::domain_error("is_probable_prime: rounds must be >= 1");
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    if (n < 65536) {
        for (Nat d = 3; d * d <= n; d += 2) {
            if (n % d == 0) return false;
        }
        return true;
    }
    Nat odd_part = n - 1;
    unsigned two_exp = 0;
    while (odd_part % 2 == 0) {
        odd_part >>= 1;
        ++two_exp;
    }
    RandomStream witness_rng(static_cast<std::uint64_t>(n & 0xFFFFFFFFFFFFFFFFULL), 0x6D72);
    for (unsigned round = 0; round < rounds; ++round) {
        const Nat witness = witness_rng.below(n - 3) + 2;
        if (!detail::miller_rabin_round(n, witness, odd_part, two_exp)) return false;
    }
    return true;
}

// Rejection sampling over candidates with both end bits forced, so every
// result has exactly `bits` bits and is odd.
inline Nat random_odd_prime(unsigned bits, RandomStream& rng) {
    if (bits < 3) throw std::domain_error("random_odd_prime: need bits >= 3");
    const Nat middle_span = Nat(1) << (bits - 2);
    for (;;) {
        const Nat candidate = (Nat(1) << (bits - 1)) | (rng.below(middle_span) << 1) | 1;
        if (is_probable_prime(candidate, 32)) return candidate;
    }
}

// Tonelli-Shanks. Returns the smaller of the two roots so the result is a
// deterministic function of (c, p).
inline Nat sqrt_mod_prime(const Nat& c, const Nat& p) {
    if (p < 3 || p % 2 == 0) throw std::domain_error("sqrt_mod_prime: modulus must be an odd prime");
    const Nat a = c % p;
    if (a == 0) return 0;
    if (mod_pow(a, (p - 1) / 2, p) != 1) throw NonResidue(a, p);

    Nat root;
    if (p % 4 == 3) {
        root = mod_pow(a, (p + 1) / 4, p);
    } else {
        Nat odd_part = p - 1;
        unsigned two_exp = 0;
        while (odd_part % 2 == 0) {
            odd_part >>= 1;
            ++two_exp;
        }
        Nat nonresidue = 2;
        while (mod_pow(nonresidue, (p - 1) / 2, p) != p - 1) ++nonresidue;

        unsigned m = two_exp;
        Nat c_acc = mod_pow(nonresidue, odd_part, p);
        Nat t = mod_pow(a, odd_part, p);
        root = mod_pow(a, (odd_part + 1) / 2, p);
        while (t != 1) {
            Nat t2 = t;
            unsigned i = 0;
            while (t2 != 1) {
                t2 = (t2 * t2) % p;
                ++i;
            }
            Nat b = c_acc;
            for (unsigned j = 0; j + i + 1 < m; ++j) b = (b * b) % p;
            m = i;
            c_acc = (b * b) % p;
            t = (t * c_acc) % p;
            root = (root * b) % p;
        }
    }
    const Nat mirrored = p - root;
    return root < mirrored ? root : mirrored;
}

// Unique x in [0, p*q) matching both residues.
inline Nat crt_combine(const Nat& a_p, const Nat& p, const Nat& a_q, const Nat& q) {
    if (p < 1 || q < 1) throw std::domain_error("crt_combine: moduli must be positive");
    const auto [g, p_inv_mod_q] = detail::mod_inverse_pair(p, q);
    if (g != 1) throw std::domain_error("crt_combine: moduli are not coprime");
    const Nat rp = a_p % p;
    Nat diff = (a_q - rp) % q;
    if (diff < 0) diff += q;
    const Nat t = (diff * p_inv_mod_q) % q;
    return rp + p * t;
}

// A squaring modulus n = p*q with the factorization held as the secret.
struct RabinModulus {
    Nat p;
    Nat q;
    Nat n;

    static RabinModulus from_primes(Nat p, Nat q) {
        if (p == q) throw std::domain_error("RabinModulus: primes must be distinct");
        if (p % 2 == 0 || q % 2 == 0) throw std::domain_error("RabinModulus: primes must be odd");
        if (!is_probable_prime(p) || !is_probable_prime(q)) {
            throw std::domain_error("RabinModulus: both factors must be prime");
        }
        RabinModulus m;
        m.n = p * q;
        m.p = std::move(p);
        m.q = std::move(q);
        return m;
    }

    static RabinModulus sample(unsigned prime_bits, RandomStream& rng) {
        const Nat p = random_odd_prime(prime_bits, rng);
        Nat q = random_odd_prime(prime_bits, rng);
        while (q == p) q = random_odd_prime(prime_bits, rng);
        return from_primes(p, q);
    }

    std::size_t bits() const { return bit_length(n); }
};

// The four square roots of a unit residue mod p*q, ascending.
struct RootQuad {
    std::array<Nat, 4> roots;

    bool contains(const Nat& x) const {
        return roots[0] == x || roots[1] == x || roots[2] == x || roots[3] == x;
    }
    const Nat& min_root() const { return roots[0]; }
};

// All four sign combinations of the per-prime roots, recombined. The two
// roots mod p and the two mod q give exactly four values mod n, and any two
// of them that do not sum to n disagree at exactly one prime.
inline RootQuad four_roots(const Nat& c, const RabinModulus& m) {
    const Nat a = c % m.n;
    const Nat g = gcd(a, m.n);
    if (g != 1) throw FactorLeak(g);

    const Nat root_p = sqrt_mod_prime(a % m.p, m.p);
    const Nat root_q = sqrt_mod_prime(a % m.q, m.q);

    RootQuad quad;
    quad.roots[0] = crt_combine(root_p, m.p, root_q, m.q);
    quad.roots[1] = crt_combine(root_p, m.p, m.q - root_q, m.q);
    quad.roots[2] = crt_combine(m.p - root_p, m.p, root_q, m.q);
    quad.roots[3] = crt_combine(m.p - root_p, m.p, m.q - root_q, m.q);
    std::sort(quad.roots.begin(), quad.roots.end());
    for (int i = 0; i < 3; ++i) {
        if (quad.roots[i] == quad.roots[i + 1]) {
            throw std::logic_error("four_roots: roots not distinct; modulus invariants violated");
        }
    }
    return quad;
}

// gcd of the root difference with the modulus; absent when the roots agree
// up to sign and the gcd is trivial.
inline std::optional<Nat> factor_from_roots(const Nat& r1, const Nat& r2, const Nat& n_public) {
    if (n_public < 1) throw std::domain_error("factor_from_roots: modulus must be positive");
    Nat diff = (r1 - r2) % n_public;
    if (diff < 0) diff += n_public;
    const Nat g = gcd(diff, n_public);
    if (g > 1 && g < n_public) return g;
    return std::nullopt;
}

}  // namespace witnesskit
