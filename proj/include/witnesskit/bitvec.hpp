#pragma once

#include "witnesskit/rng.hpp"

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace witnesskit {

// Fixed-length GF(2) vector. Position 0 is the leftmost character of a
// string literal and index 0 of every positional contract; this is the one
// place the convention is stated. Bits are packed into 64-bit words, but no
// contract depends on the packing.
class BitVec {
  public:
    BitVec() = default;

    explicit BitVec(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

    static BitVec from_string(std::string_view s) {
        BitVec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') {
                v.set(i, true);
            } else if (s[i] != '0') {
                throw std::invalid_argument("BitVec::from_string: expected only 0/1 characters");
            }
        }
        return v;
    }

    std::size_t size() const { return len_; }

    bool get(std::size_t i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    void set(std::size_t i, bool value) {
        check_index(i);
        const std::uint64_t bit = 1ULL << (i & 63);
        if (value) {
            words_[i >> 6] |= bit;
        } else {
            words_[i >> 6] &= ~bit;
        }
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (std::uint64_t word : words_) w += static_cast<std::size_t>(std::popcount(word));
        return w;
    }

    BitVec zero_extended(std::size_t len) const {
        if (len < len_) throw std::domain_error("BitVec::zero_extended: target shorter than vector");
        BitVec out(len);
        for (std::size_t t = 0; t < words_.size(); ++t) out.words_[t] = words_[t];
        return out;
    }

    std::string to_string() const {
        std::string s(len_, '0');
        for (std::size_t i = 0; i < len_; ++i) {
            if (get(i)) s[i] = '1';
        }
        return s;
    }

    friend BitVec operator^(const BitVec& a, const BitVec& b) {
        if (a.len_ != b.len_) throw std::domain_error("BitVec xor: length mismatch");
        BitVec out(a.len_);
        for (std::size_t t = 0; t < a.words_.size(); ++t) out.words_[t] = a.words_[t] ^ b.words_[t];
        return out;
    }

    bool operator==(const BitVec& other) const = default;
    auto operator<=>(const BitVec& other) const = default;

  private:
    void check_index(std::size_t i) const {
        if (i >= len_) throw std::out_of_range("BitVec: index out of range");
    }

    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;  // bit i lives in word i/64 at position i%64
};

// Prefix parity: result(i) = v(0) xor ... xor v(i).
inline BitVec par(const BitVec& v) {
    BitVec out(v.size());
    bool acc = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc ^= v.get(i);
        out.set(i, acc);
    }
    return out;
}

// Inverse of par. Each output bit reads at most two input bits
// (positions i-1 and i), which is what makes the map constant-depth.
inline BitVec unpar(const BitVec& v) {
    BitVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const bool bit = (i == 0) ? v.get(0) : (v.get(i - 1) ^ v.get(i));
        out.set(i, bit);
    }
    return out;
}

// Total parity of the vector, i.e. par(v) at the last position.
inline int parity_bit(const BitVec& v) {
    if (v.size() == 0) throw std::domain_error("parity_bit: empty vector");
    return static_cast<int>(v.weight() & 1);
}

// Uniform vector of m bits: bit i is bit (i mod 64) of the (i/64)-th word
// drawn from the stream.
inline BitVec random_bitvec(RandomStream& rng, std::size_t m) {
    BitVec out(m);
    const auto words = rng.next_words((m + 63) / 64);
    for (std::size_t i = 0; i < m; ++i) {
        out.set(i, (words[i >> 6] >> (i & 63)) & 1);
    }
    return out;
}

// Rectangular bit matrix held as rows; row r is accessed the way a
// two-dimensional bit array is indexed row-major.
class BitMatrix {
  public:
    BitMatrix() = default;

    BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

    explicit BitMatrix(std::vector<BitVec> rows) : rows_(std::move(rows)) {
        cols_ = rows_.empty() ? 0 : rows_.front().size();
        for (const auto& r : rows_) {
            if (r.size() != cols_) throw std::domain_error("BitMatrix: ragged rows");
        }
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows() == cols_; }

    const BitVec& row(std::size_t i) const { return rows_.at(i); }
    void set_row(std::size_t i, BitVec v) {
        if (v.size() != cols_) throw std::domain_error("BitMatrix::set_row: length mismatch");
        rows_.at(i) = std::move(v);
    }

    const std::vector<BitVec>& row_vector() const { return rows_; }

    // Newline-separated 0/1 rows; the text form used by the CLI.
    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i > 0) s += '\n';
            s += rows_[i].to_string();
        }
        return s;
    }

    bool operator==(const BitMatrix& other) const = default;
    auto operator<=>(const BitMatrix& other) const = default;

  private:
    std::size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

inline std::string text_of(const BitVec& v) { return v.to_string(); }

}  // namespace witnesskit
