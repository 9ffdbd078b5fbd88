#pragma once

#include <cstdint>
#include <vector>

#include "rsfft/decode.hpp"
#include "rsfft/noise.hpp"
#include "rsfft/spectrum.hpp"

namespace rsfft {

// All frequencies of Hamming weight <= d, ordered by (weight, packed value).
class MonomialBasis {
 public:
  MonomialBasis(int n, int d);

  int n() const { return n_; }
  int degree() const { return d_; }
  std::size_t size() const { return freqs_.size(); }
  const std::vector<std::uint64_t>& freqs() const { return freqs_; }

 private:
  int n_ = 0;
  int d_ = 0;
  std::vector<std::uint64_t> freqs_;
};

// Signed character vector at x: entry j is (-1)^{<freqs[j], x>}.
std::vector<double> monomial_features(const FreqVec& x, const MonomialBasis& basis);

struct LowDegConfig {
  int n = 4;
  int d = 1;
  double delta = 0.01;          // slack under the 1/(4*3^(2d)) outlier cap
  double sample_constant = 4.0; // m = C * N * ln N / delta^2, N = basis size
  long long m_override = 0;
  L1FitOptions fit;
  std::uint64_t seed = 0;

  long long sample_count(std::size_t basis_size) const;
  double rho_cap() const;  // 1/(4*3^(2d)) - delta
};

struct LowDegResult {
  BooleanSpectrum spectrum;
  long long m = 0;
  double residual = 0.0;
  bool failed = false;
  std::vector<std::uint64_t> sample_points;
};

LowDegResult recover_low_degree(const BooleanOracle& oracle, const LowDegConfig& cfg);

// E|p|, the coefficient 2-norm, and their ratio; exact over the cube for
// n <= 20, stratified sampling with a standard error above that.
struct HypercontractiveBound {
  double mean_abs = 0.0;
  double coeff_norm2 = 0.0;
  double ratio = 0.0;
  bool exact = true;
  double std_error = 0.0;
  bool within_bounds = false;  // ratio in [3^-d, 1] (with sampling slack if inexact)
};
HypercontractiveBound hypercontractive_lower_bound(const std::vector<double>& coeffs,
                                                   const MonomialBasis& basis,
                                                   std::uint64_t sample_seed = 0,
                                                   long long samples = 1 << 18);

// Worst-subset mass check at the given points: S = the floor(rho*m) largest
// |p(x_i)| (sorting realizes the adversarial supremum).
struct EuclideanSectionReport {
  double worst_subset_sum = 0.0;
  double total_sum = 0.0;
  bool half_mass_ok = false;     // sum_S <= (1/2 - delta) * total
  bool mean_gap_ok = false;      // sum_S + delta*m*E|p| <= sum_rest
  bool coeff_gap_ok = false;     // sum_S + delta*3^-d*m*||p||_2 <= sum_rest
};
EuclideanSectionReport euclidean_section_check(const std::vector<double>& coeffs,
                                               const MonomialBasis& basis,
                                               const std::vector<std::uint64_t>& points,
                                               double rho, double delta);

}  // namespace rsfft
