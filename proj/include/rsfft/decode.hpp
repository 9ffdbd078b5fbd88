#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rsfft/l1fit.hpp"
#include "rsfft/noise.hpp"
#include "rsfft/rng.hpp"
#include "rsfft/spectrum.hpp"

namespace rsfft {

// Knobs of the budget-sweep decoder. The sample count follows
//   m = ceil(sample_constant * k^2 * ln|T| * ln(1/gamma) / delta^2)
// unless pinned by m_override; the hidden constants of the asymptotic form
// are not reproducible, so they are exposed here for tuning.
struct DecodeConfig {
  int k = 1;
  double gamma = 1e-2;   // failure probability budget for the m formula
  double delta = 0.25;   // outlier rate rho = 1/2 - delta
  double eta = 1.0;      // smallest coefficient magnitude assumed present
  double sample_constant = 8.0;
  long long m_override = 0;
  double sigma = 0.0;  // budget-sweep step; <= 0 selects m * eta * delta / 100
  L1FitOptions fit;

  void validate() const;
  long long sample_count(std::size_t num_characters) const;
};

struct SweepDiag {
  double delta_budget = 0.0;
  LpStatus lp_status = LpStatus::kInfeasible;
  double lp_objective = 0.0;
  double refit_residual = 0.0;
  bool usable = false;
  long long lp_iterations = 0;
  std::vector<std::size_t> support;  // character indices kept at this budget
};

struct BooleanDecodeResult {
  BooleanSpectrum spectrum;  // ambient dimension = the decoded domain's ell
  long long m = 0;
  double delta_star = 0.0;
  bool decode_failed = false;  // every budget value failed
  bool clamped = false;
  std::vector<SweepDiag> sweep;
  std::vector<std::uint64_t> samples;
  std::vector<double> observations;
};

struct CyclicDecodeResult {
  CyclicSpectrum spectrum;
  long long m = 0;
  double delta_star = 0.0;
  bool decode_failed = false;
  bool clamped = false;
  std::vector<SweepDiag> sweep;
  std::vector<std::int64_t> samples;
  std::vector<cplx> observations;
};

using BooleanQueryFn = std::function<double(const FreqVec&)>;
using CyclicQueryFn = std::function<cplx(std::int64_t)>;

// Budget-sweep decoder over {0,1}^ell restricted to the given characters:
// sample, sweep the residual budget, keep the k largest recovered
// coefficients per budget, refit by least absolute deviations, and return the
// refit with the smallest residual (ties to the smaller budget). Budgets whose
// LP fails are skipped.
BooleanDecodeResult linear_decode_boolean(const BooleanQueryFn& query, int ell,
                                          const std::vector<std::uint64_t>& characters,
                                          const DecodeConfig& cfg, Rng rng);

// Same over Z_modulus with all modulus characters; samples are distinct
// residues (capped at the modulus) so grid queries never coincide.
CyclicDecodeResult linear_decode_cyclic(const CyclicQueryFn& query, std::int64_t modulus,
                                        const DecodeConfig& cfg, Rng rng);

// Exhaustive k-sparse reference: every size-k support, least absolute
// deviations on each, global residual minimizer (ties to the earlier support
// in ascending enumeration order).
struct BruteforceResult {
  std::vector<std::size_t> support;  // column indices into the design
  std::vector<double> coeffs;        // dense, aligned with design columns
  double residual = 0.0;
};
BruteforceResult k_sparse_bruteforce(const std::vector<std::vector<double>>& design,
                                     const std::vector<double>& obs, int k,
                                     std::size_t max_supports = 100000,
                                     const L1FitOptions& opts = {});

// Design-matrix helpers shared by decoders and tests.
std::vector<std::vector<double>> boolean_design(const std::vector<std::uint64_t>& characters,
                                                const std::vector<std::uint64_t>& points);
std::vector<std::vector<cplx>> cyclic_design(std::int64_t modulus,
                                             const std::vector<std::int64_t>& points);

}  // namespace rsfft
