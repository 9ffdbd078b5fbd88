#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rsfft/noise.hpp"
#include "rsfft/rng.hpp"
#include "rsfft/spectrum.hpp"

namespace rsfft {

// Nonzero lattice amplitudes (a, b) in (eta Z)^2 with a^2 + b^2 <= 1,
// ascending lexicographic in (re, im).
std::vector<cplx> granular_amplitude_lattice(double eta);

// Candidate family: k distinct ascending integer frequencies in [-F, F],
// amplitudes from the lattice, total power sum <= 1. Candidates are addressed
// by a raw index = (frequency-combo rank) * |L|^k + mixed-radix amplitude
// index, which fixes the enumeration (and first-acceptance) order.
class GranularGrid {
 public:
  GranularGrid(std::int64_t bandlimit, int k, double eta,
               std::uint64_t raw_guard = 10'000'000);

  std::int64_t bandlimit() const { return bandlimit_; }
  int k() const { return k_; }
  double eta() const { return eta_; }
  const std::vector<cplx>& lattice() const { return lattice_; }
  std::uint64_t raw_size() const { return raw_size_; }

  // Decode the raw index; false when the amplitude tuple breaks the power
  // budget (such indices are skipped in enumeration order).
  bool candidate(std::uint64_t raw_index, std::vector<std::int64_t>& freqs,
                 std::vector<cplx>& amps) const;

  TorusSpectrum to_spectrum(const std::vector<std::int64_t>& freqs,
                            const std::vector<cplx>& amps) const;

  // Qualifying candidates in order; visitor returns false to stop. Returns
  // the number of candidates visited.
  std::uint64_t visit(const std::function<bool(const TorusSpectrum&)>& fn) const;
  std::uint64_t count() const;

 private:
  std::int64_t bandlimit_ = 0;
  int k_ = 0;
  double eta_ = 0.0;
  std::vector<cplx> lattice_;
  std::uint64_t combos_ = 0;
  std::uint64_t amp_tuples_ = 0;
  std::uint64_t raw_size_ = 0;
  std::vector<std::vector<std::uint64_t>> binom_;
};

struct GranularDecodeConfig {
  double delta = 0.2;      // acceptance threshold (0.5 - delta/2) * m
  double epsilon = 1e-4;   // per-point mismatch tolerance
  double sample_constant = 2.0;  // m = C * k * ln(F/eta) / delta^2
  long long m_override = 0;
  std::uint64_t seed = 0;

  long long sample_count(std::int64_t bandlimit, int k, double eta) const;
};

struct GranularDecodeResult {
  TorusSpectrum spectrum;
  bool accepted = false;      // false: no candidate fit the noise model
  std::uint64_t candidate_index = 0;
  long long m = 0;
  std::vector<double> sample_points;
};

GranularDecodeResult granular_decode(const TorusOracle& oracle, const GranularGrid& grid,
                                     const GranularDecodeConfig& cfg);

// Fraction of uniform grid points with |f(t)| <= tau.
double anticoncentration_probe(const TorusSpectrum& spec, double tau, std::size_t grid_size);

// Trapezoid check of log|P(0)| <= avg_theta log|P(e^{i theta})| where
// P(z) = sum_j v_j z^{xi_j - xi_1}; requires the lowest-frequency coefficient
// to be nonzero.
struct JensenReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};
JensenReport jensen_check(const TorusSpectrum& spec, std::size_t nodes);

// Normalized binomial comb f(t) with coefficients C(k,j)/sqrt(C(2k,k)) at
// frequencies 0..k; unit coefficient 2-norm within 1e-9. k <= 60.
TorusSpectrum counterexample_signal(int k);

}  // namespace rsfft
