#pragma once

#include <complex>
#include <vector>

#include "rsfft/lp.hpp"
#include "rsfft/spectrum.hpp"

namespace rsfft {

// Polyhedral stand-in for the complex modulus. kBox is |re| + |im| (within
// sqrt(2) of the modulus); kPolygon uses `polygon_facets` supporting
// half-planes and over-estimates the modulus by at most sec(pi/facets).
enum class SurrogateNorm { kBox, kPolygon };

struct L1FitOptions {
  SurrogateNorm surrogate = SurrogateNorm::kBox;
  int polygon_facets = 8;
  LpOptions lp;
};

struct L1FitReal {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> coeffs;
  double objective = 0.0;  // LP objective value
  double residual = 0.0;   // sum_i |obs_i - fit_i| at the solution
  bool possibly_nonunique = false;
  long long lp_iterations = 0;
};

struct L1FitComplex {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<cplx> coeffs;
  double objective = 0.0;
  double residual = 0.0;  // true-modulus residual sum at the solution
  bool possibly_nonunique = false;
  long long lp_iterations = 0;
};

// Least absolute deviations: min_c sum_i |obs_i - design_i . c|, c free.
// design is row-major, m x p with m >= 1, p >= 1.
L1FitReal l1_regression(const std::vector<std::vector<double>>& design,
                        const std::vector<double>& obs, const L1FitOptions& opts = {});

// Coefficient-l1 minimization under a data-fit budget:
// min sum_j |c_j|  s.t.  sum_i |obs_i - design_i . c| <= budget.
// `warm` chains the optimal basis across a growing-budget sweep.
L1FitReal l1_spectral_min(const std::vector<std::vector<double>>& design,
                          const std::vector<double>& obs, double budget,
                          const L1FitOptions& opts = {}, LpWarmState* warm = nullptr);

// Complex versions; moduli are replaced by the configured surrogate.
L1FitComplex l1_regression(const std::vector<std::vector<cplx>>& design,
                           const std::vector<cplx>& obs, const L1FitOptions& opts = {});
L1FitComplex l1_spectral_min(const std::vector<std::vector<cplx>>& design,
                             const std::vector<cplx>& obs, double budget,
                             const L1FitOptions& opts = {}, LpWarmState* warm = nullptr);

}  // namespace rsfft
