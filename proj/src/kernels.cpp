#include "rsfft/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace rsfft {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(std::size_t n) { return n && (n & (n - 1)) == 0; }
}  // namespace

void wht_serial(std::vector<double>& a) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("wht: length must be a power of two");
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = a[j];
        const double y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

void wht_parallel(std::vector<double>& a) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("wht: length must be a power of two");
  for (std::size_t h = 1; h < n; h <<= 1) {
    const std::ptrdiff_t blocks = static_cast<std::ptrdiff_t>(n / (2 * h));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      const std::size_t i = static_cast<std::size_t>(b) * 2 * h;
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = a[j];
        const double y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

namespace {

inline std::complex<double> dft_bin(const std::vector<std::complex<double>>& in,
                                    std::size_t l, int sign, double scale) {
  const std::size_t b = in.size();
  std::complex<double> acc = 0.0;
  const double base = sign * kTwoPi * static_cast<double>(l) / static_cast<double>(b);
  for (std::size_t x = 0; x < b; ++x) {
    const double ang = base * static_cast<double>(x);
    acc += in[x] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc * scale;
}

}  // namespace

std::vector<std::complex<double>> cyclic_dft_serial(
    const std::vector<std::complex<double>>& in, int sign, double scale) {
  const std::size_t b = in.size();
  std::vector<std::complex<double>> out(b);
  for (std::size_t l = 0; l < b; ++l) out[l] = dft_bin(in, l, sign, scale);
  return out;
}

std::vector<std::complex<double>> cyclic_dft_parallel(
    const std::vector<std::complex<double>>& in, int sign, double scale) {
  const std::size_t b = in.size();
  std::vector<std::complex<double>> out(b);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(b); ++l)
    out[static_cast<std::size_t>(l)] = dft_bin(in, static_cast<std::size_t>(l), sign, scale);
  return out;
}

namespace {

inline bool below_at(const std::vector<long long>& freqs,
                     const std::vector<std::complex<double>>& coeffs, double tau,
                     double t) {
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    const double ang = kTwoPi * static_cast<double>(freqs[j]) * t;
    acc += coeffs[j] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return std::abs(acc) <= tau;
}

}  // namespace

std::size_t grid_count_below_serial(const std::vector<long long>& freqs,
                                    const std::vector<std::complex<double>>& coeffs,
                                    double tau, std::size_t grid_size) {
  std::size_t count = 0;
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double t = static_cast<double>(g) / static_cast<double>(grid_size);
    if (below_at(freqs, coeffs, tau, t)) ++count;
  }
  return count;
}

std::size_t grid_count_below_parallel(const std::vector<long long>& freqs,
                                      const std::vector<std::complex<double>>& coeffs,
                                      double tau, std::size_t grid_size) {
  long long count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
  for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(grid_size); ++g) {
    const double t = static_cast<double>(g) / static_cast<double>(grid_size);
    if (below_at(freqs, coeffs, tau, t)) ++count;
  }
  return static_cast<std::size_t>(count);
}

}  // namespace rsfft
