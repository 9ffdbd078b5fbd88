#include "rsfft/f2.hpp"

#include <algorithm>

namespace rsfft {

std::string to_bitstring(const FreqVec& v) {
  std::string s(v.n, '0');
  for (int i = 0; i < v.n; ++i)
    if (v.bit(i)) s[i] = '1';
  return s;
}

FreqVec from_bitstring(const std::string& s) {
  if (s.size() > 64) throw std::invalid_argument("bitstring longer than 64");
  FreqVec v(0, static_cast<int>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      v.bits |= (std::uint64_t{1} << i);
    else if (s[i] != '0')
      throw std::invalid_argument("bitstring must be 0/1");
  }
  return v;
}

F2Matrix F2Matrix::identity(int n) {
  F2Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

int F2Matrix::rank() const {
  std::vector<std::uint64_t> work = bits_;
  int r = 0;
  for (int c = 0; c < cols_ && r < rows_; ++c) {
    int pivot = -1;
    for (int i = r; i < rows_; ++i) {
      if ((work[i] >> c) & 1) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(work[r], work[pivot]);
    for (int i = 0; i < rows_; ++i) {
      if (i != r && ((work[i] >> c) & 1)) work[i] ^= work[r];
    }
    ++r;
  }
  return r;
}

F2Matrix F2Matrix::inverse() const {
  if (rows_ != cols_) throw std::domain_error("F2Matrix::inverse: not square");
  const int n = rows_;
  std::vector<std::uint64_t> left = bits_;
  std::vector<std::uint64_t> right(n, 0);
  for (int i = 0; i < n; ++i) right[i] = std::uint64_t{1} << i;

  for (int c = 0; c < n; ++c) {
    int pivot = -1;
    for (int i = c; i < n; ++i) {
      if ((left[i] >> c) & 1) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) throw std::domain_error("F2Matrix::inverse: singular matrix");
    std::swap(left[c], left[pivot]);
    std::swap(right[c], right[pivot]);
    for (int i = 0; i < n; ++i) {
      if (i != c && ((left[i] >> c) & 1)) {
        left[i] ^= left[c];
        right[i] ^= right[c];
      }
    }
  }
  F2Matrix inv(n, n);
  for (int i = 0; i < n; ++i) inv.set_row(i, right[i]);
  return inv;
}

F2Matrix F2Matrix::transpose() const {
  F2Matrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (get(r, c)) t.set(c, r, true);
  return t;
}

F2Matrix F2Matrix::multiply(const F2Matrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("F2Matrix::multiply: shape mismatch");
  F2Matrix out(rows_, other.cols_);
  for (int r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    std::uint64_t row_bits = bits_[r];
    while (row_bits) {
      const int c = std::countr_zero(row_bits);
      row_bits &= row_bits - 1;
      acc ^= other.bits_[c];
    }
    out.set_row(r, acc);
  }
  return out;
}

FreqVec F2Matrix::apply(const FreqVec& x) const {
  if (x.n != cols_) throw std::invalid_argument("F2Matrix::apply: length mismatch");
  std::uint64_t out = 0;
  for (int r = 0; r < rows_; ++r) {
    if (std::popcount(bits_[r] & x.bits) & 1) out |= std::uint64_t{1} << r;
  }
  return FreqVec(out, rows_);
}

std::optional<F2Matrix> random_invertible_f2(int n, Rng& rng, int max_tries) {
  if (n < 1 || n > 64) throw std::invalid_argument("random_invertible_f2: n out of range");
  const std::uint64_t mask = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    F2Matrix m(n, n);
    for (int r = 0; r < n; ++r) m.set_row(r, rng.next_u64() & mask);
    if (m.rank() == n) return m;
  }
  return std::nullopt;
}

FreqVec transpose_inverse_apply(const F2Matrix& a, const FreqVec& xi) {
  return a.transpose().inverse().apply(xi);
}

}  // namespace rsfft
