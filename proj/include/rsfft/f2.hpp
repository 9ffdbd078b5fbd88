#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsfft/rng.hpp"

namespace rsfft {

// Bit vector over F2 of fixed length n <= 64, packed into one word.
// Bit i (LSB first) is coordinate x_{i+1}.
struct FreqVec {
  std::uint64_t bits = 0;
  int n = 0;

  FreqVec() = default;
  FreqVec(std::uint64_t b, int len) : bits(b), n(len) {
    if (len < 0 || len > 64) throw std::invalid_argument("FreqVec: length out of range");
    if (len < 64) bits &= (len == 0) ? 0 : ((~std::uint64_t{0}) >> (64 - len));
  }

  bool bit(int i) const { return (bits >> i) & 1; }
  int weight() const { return std::popcount(bits); }

  friend bool operator==(const FreqVec& a, const FreqVec& b) {
    return a.n == b.n && a.bits == b.bits;
  }
  friend bool operator<(const FreqVec& a, const FreqVec& b) {
    return a.bits < b.bits;
  }
};

inline int dot_f2(const FreqVec& a, const FreqVec& b) {
  return std::popcount(a.bits & b.bits) & 1;
}
inline FreqVec add_f2(const FreqVec& a, const FreqVec& b) {
  return FreqVec(a.bits ^ b.bits, a.n);
}
inline FreqVec unit_vec(int i, int n) { return FreqVec(std::uint64_t{1} << i, n); }

std::string to_bitstring(const FreqVec& v);
FreqVec from_bitstring(const std::string& s);

// Square-friendly bit matrix over F2, rows packed LSB-first. n <= 64.
class F2Matrix {
 public:
  F2Matrix() = default;
  F2Matrix(int rows, int cols) : rows_(rows), cols_(cols), bits_(rows, 0) {
    if (rows < 0 || cols < 0 || cols > 64) throw std::invalid_argument("F2Matrix: bad shape");
  }

  static F2Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool get(int r, int c) const { return (bits_[r] >> c) & 1; }
  void set(int r, int c, bool v) {
    if (v)
      bits_[r] |= (std::uint64_t{1} << c);
    else
      bits_[r] &= ~(std::uint64_t{1} << c);
  }
  std::uint64_t row(int r) const { return bits_[r]; }
  void set_row(int r, std::uint64_t v) { bits_[r] = v; }

  int rank() const;
  bool invertible() const { return rows_ == cols_ && rank() == rows_; }

  // Gaussian-elimination inverse; throws std::domain_error when singular.
  F2Matrix inverse() const;
  F2Matrix transpose() const;
  F2Matrix multiply(const F2Matrix& other) const;

  // y = A x over F2.
  FreqVec apply(const FreqVec& x) const;

  friend bool operator==(const F2Matrix& a, const F2Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bits_ == b.bits_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Uniform over GL(n, 2) by rejection sampling; at most `max_tries` draws,
// nullopt on exhaustion.
std::optional<F2Matrix> random_invertible_f2(int n, Rng& rng, int max_tries = 1000);

// (A^T)^{-1} xi, the frequency map induced by the substitution x -> Ax + b.
FreqVec transpose_inverse_apply(const F2Matrix& a, const FreqVec& xi);

}  // namespace rsfft
