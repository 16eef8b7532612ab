#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace witnesskit {

// Unbounded non-negative integer. Negative values are never stored in a Nat
// by contract; intermediate signed arithmetic is normalized at the call site.
using Nat = boost::multiprecision::cpp_int;

// Number of digits in the binary expansion; bit_length(0) == 0.
inline std::size_t bit_length(const Nat& x) {
    if (x == 0) return 0;
    return static_cast<std::size_t>(boost::multiprecision::msb(x)) + 1;
}

inline Nat pow_nat(const Nat& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

inline std::string text_of(const Nat& x) { return x.str(); }

inline Nat nat_from_text(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("nat_from_text: empty string");
    return Nat(s);
}

}  // namespace witnesskit
