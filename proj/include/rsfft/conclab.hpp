#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rsfft/rng.hpp"
#include "rsfft/spectrum.hpp"

namespace rsfft {

// Samplers for the function families whose empirical l1/l2 sample
// concentration the lab measures. Every emitted function satisfies its
// family's defining inequality by construction.
enum class FamilyKind {
  kSparse,         // k random characters, random coefficients
  kRelaxedSpread,  // k heavy entries +- 1/sqrt(k), light tail +- sqrt(k)/N
  kDegree,         // dense random low-degree polynomial
};

struct FamilySampler {
  FamilyKind kind = FamilyKind::kSparse;
  int n = 8;        // boolean cube dimension
  int k_or_d = 2;   // sparsity for the first two kinds, degree for the third

  BooleanSpectrum sample(Rng& rng) const;
  // Sparsity parameter against which membership is checked.
  int family_k() const;
};

// Structured candidates for stressing the concentration claims.
BooleanSpectrum single_character_spectrum(int n, std::uint64_t xi);
BooleanSpectrum and_indicator_spectrum(int n, int vars);
BooleanSpectrum spread_vector_spectrum(int n, int k, Rng& rng);

// Three-part membership check for the normalized relaxed family:
// l1 <= 2 sqrt(k), sup |h| <= 2 sqrt(k), E|h| >= 1/(2 sqrt(k)).
// Ratios are value/bound (and bound/value for the mean), so members have all
// ratios <= 1.
struct FamilyMembership {
  bool member = false;
  double norm1_ratio = 0.0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
};
FamilyMembership family_f_membership(const BooleanSpectrum& h, int k);

struct DeviationReport {
  long long m = 0;
  int trials = 0;
  int skipped = 0;  // trials with E|h| = 0
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double max = 0.0;
  std::vector<double> deviations;  // per trial, ascending
};

// Relative deviation of sum_i |h(x_i)| (or squares) from m * E[|h|] over
// seeded trials; expectations are exact (full enumeration, n <= 16).
DeviationReport ell1_deviation(const FamilySampler& sampler, long long m, int trials,
                               std::uint64_t seed, bool squared = false);

// Fraction of trials in which every one of k random frequencies is isolated.
double boolean_isolation_rate(int n, int ell, int k, int trials, std::uint64_t seed);
double torus_isolation_rate(std::int64_t bandlimit, double prime_floor, int prime_pool,
                            int k, int trials, std::uint64_t seed);

}  // namespace rsfft
