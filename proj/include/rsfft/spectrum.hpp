#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rsfft/f2.hpp"

namespace rsfft {

using cplx = std::complex<double>;

// Coefficients with magnitude below this are dropped on construction;
// sparsity is semantic.
inline constexpr double kCoeffDropTol = 1e-12;

// Sparse real spectrum over {0,1}^n: map from frequency bits to coefficient.
class BooleanSpectrum {
 public:
  BooleanSpectrum() = default;
  explicit BooleanSpectrum(int n) : n_(n) {}

  int n() const { return n_; }
  std::size_t sparsity() const { return entries_.size(); }
  const std::map<std::uint64_t, double>& entries() const { return entries_; }

  void set(FreqVec xi, double coeff);
  void set(std::uint64_t bits, double coeff);
  double coeff(std::uint64_t bits) const;

  double norm1() const;
  double norm2() const;

  friend bool operator==(const BooleanSpectrum& a, const BooleanSpectrum& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  int n_ = 0;
  std::map<std::uint64_t, double> entries_;
};

// Sparse complex spectrum over the torus with integer frequencies in [-F, F].
class TorusSpectrum {
 public:
  TorusSpectrum() = default;
  explicit TorusSpectrum(std::int64_t bandlimit) : bandlimit_(bandlimit) {}

  std::int64_t bandlimit() const { return bandlimit_; }
  std::size_t sparsity() const { return entries_.size(); }
  const std::map<std::int64_t, cplx>& entries() const { return entries_; }

  void set(std::int64_t xi, cplx coeff);
  cplx coeff(std::int64_t xi) const;

  double norm1() const;
  double norm2() const;

 private:
  std::int64_t bandlimit_ = 0;
  std::map<std::int64_t, cplx> entries_;
};

// Sparse complex spectrum over Z_B, residues in [0, B).
class CyclicSpectrum {
 public:
  CyclicSpectrum() = default;
  explicit CyclicSpectrum(std::int64_t modulus) : modulus_(modulus) {}

  std::int64_t modulus() const { return modulus_; }
  std::size_t sparsity() const { return entries_.size(); }
  const std::map<std::int64_t, cplx>& entries() const { return entries_; }

  void set(std::int64_t residue, cplx coeff);
  cplx coeff(std::int64_t residue) const;

  double norm1() const;
  double norm2() const;

 private:
  std::int64_t modulus_ = 0;
  std::map<std::int64_t, cplx> entries_;
};

// f_hat(xi) = avg_x f(x) * (-1)^{<xi,x>}; table length must be 2^n.
BooleanSpectrum boolean_dft(const std::vector<double>& values);

// f(x) = sum_xi f_hat(xi) * (-1)^{<xi,x>}.
double boolean_eval(const BooleanSpectrum& spec, const FreqVec& x);

// Dense table of f over all 2^n points (inverse transform).
std::vector<double> boolean_table(const BooleanSpectrum& spec);

// z_hat(l) = (1/B) * sum_x z[x] * e^{-2 pi i l x / B}.
CyclicSpectrum cyclic_dft(const std::vector<cplx>& values);

// z[x] = sum_l z_hat(l) * e^{2 pi i l x / B}.
std::vector<cplx> cyclic_inverse(const CyclicSpectrum& spec);

// f(t) = sum_xi f_hat(xi) * e^{2 pi i xi t}.
cplx torus_eval(const TorusSpectrum& spec, double t);

// Spectrum of x -> g(Ax + b) in closed form; A must be invertible.
BooleanSpectrum affine_pullback_spectrum(const BooleanSpectrum& g, const F2Matrix& a,
                                         const FreqVec& b);

// JSON wire format:
// {"domain":"boolean|torus|cyclic", "n"|"F"|"B": int,
//  "entries":[{"freq": bitstring|int, "re": float, "im": float}]}
std::string spectrum_to_json(const BooleanSpectrum& s);
std::string spectrum_to_json(const TorusSpectrum& s);
std::string spectrum_to_json(const CyclicSpectrum& s);
BooleanSpectrum boolean_spectrum_from_json(const std::string& text);
TorusSpectrum torus_spectrum_from_json(const std::string& text);
CyclicSpectrum cyclic_spectrum_from_json(const std::string& text);

}  // namespace rsfft
