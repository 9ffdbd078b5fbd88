#include "rsfft/l1fit.hpp"

#include <cmath>
#include <stdexcept>

namespace rsfft {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

void check_shapes(std::size_t m, std::size_t p, std::size_t obs) {
  if (m == 0 || p == 0) throw std::invalid_argument("l1 fit: empty design");
  if (obs != m) throw std::invalid_argument("l1 fit: observation count mismatch");
}

// Shared real builder. Variables: [c+ (p) | c- (p) | u (m) | v (m)].
// Rows: X(c+ - c-) + u - v = y. The initial all-(u|v) basis is feasible, so
// the simplex skips phase 1 on regression problems.
LpProblem real_core(const std::vector<std::vector<double>>& design,
                    const std::vector<double>& obs) {
  const std::size_t m = design.size();
  const std::size_t p = design[0].size();
  LpProblem lp;
  lp.num_vars = static_cast<int>(2 * p + 2 * m);
  lp.objective.assign(lp.num_vars, 0.0);
  lp.rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (design[i].size() != p) throw std::invalid_argument("l1 fit: ragged design");
    LpProblem::Row row;
    row.coeffs.assign(lp.num_vars, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      row.coeffs[j] = design[i][j];
      row.coeffs[p + j] = -design[i][j];
    }
    row.coeffs[2 * p + i] = 1.0;
    row.coeffs[2 * p + m + i] = -1.0;
    row.rel = Relation::kEq;
    row.rhs = obs[i];
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

double residual_sum(const std::vector<std::vector<double>>& design,
                    const std::vector<double>& obs, const std::vector<double>& coeffs) {
  double s = 0.0;
  for (std::size_t i = 0; i < design.size(); ++i) {
    double fit = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) fit += design[i][j] * coeffs[j];
    s += std::abs(obs[i] - fit);
  }
  return s;
}

L1FitReal finish_real(const std::vector<std::vector<double>>& design,
                      const std::vector<double>& obs, const LpSolution& sol, std::size_t p) {
  L1FitReal out;
  out.status = sol.status;
  if (sol.status != LpStatus::kOptimal) return out;
  out.coeffs.resize(p);
  for (std::size_t j = 0; j < p; ++j) out.coeffs[j] = sol.values[j] - sol.values[p + j];
  out.objective = sol.objective;
  out.residual = residual_sum(design, obs, out.coeffs);
  out.possibly_nonunique = sol.possibly_nonunique;
  out.lp_iterations = sol.iterations;
  return out;
}

// Realified design for the box surrogate: one (re, im) row pair per sample,
// complex coefficient j becomes the real pair (2j, 2j+1).
void realify(const std::vector<std::vector<cplx>>& design, const std::vector<cplx>& obs,
             std::vector<std::vector<double>>& rdesign, std::vector<double>& robs) {
  const std::size_t m = design.size();
  const std::size_t p = design[0].size();
  rdesign.assign(2 * m, std::vector<double>(2 * p, 0.0));
  robs.assign(2 * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (design[i].size() != p) throw std::invalid_argument("l1 fit: ragged design");
    for (std::size_t j = 0; j < p; ++j) {
      const cplx x = design[i][j];
      rdesign[2 * i][2 * j] = x.real();
      rdesign[2 * i][2 * j + 1] = -x.imag();
      rdesign[2 * i + 1][2 * j] = x.imag();
      rdesign[2 * i + 1][2 * j + 1] = x.real();
    }
    robs[2 * i] = obs[i].real();
    robs[2 * i + 1] = obs[i].imag();
  }
}

double residual_sum_complex(const std::vector<std::vector<cplx>>& design,
                            const std::vector<cplx>& obs, const std::vector<cplx>& coeffs) {
  double s = 0.0;
  for (std::size_t i = 0; i < design.size(); ++i) {
    cplx fit = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) fit += design[i][j] * coeffs[j];
    s += std::abs(obs[i] - fit);
  }
  return s;
}

L1FitComplex from_real(const std::vector<std::vector<cplx>>& design,
                       const std::vector<cplx>& obs, const L1FitReal& real) {
  L1FitComplex out;
  out.status = real.status;
  if (real.status != LpStatus::kOptimal) return out;
  const std::size_t p = real.coeffs.size() / 2;
  out.coeffs.resize(p);
  for (std::size_t j = 0; j < p; ++j)
    out.coeffs[j] = cplx{real.coeffs[2 * j], real.coeffs[2 * j + 1]};
  out.objective = real.objective;
  out.residual = residual_sum_complex(design, obs, out.coeffs);
  out.possibly_nonunique = real.possibly_nonunique;
  out.lp_iterations = real.lp_iterations;
  return out;
}

// Polygon-surrogate builder used by both complex entry points.
// Variables: [a+ a- b+ b- (4p) | s (m) | w (p, spectral only)].
L1FitComplex polygon_solve(const std::vector<std::vector<cplx>>& design,
                           const std::vector<cplx>& obs, const L1FitOptions& opts,
                           bool spectral, double budget) {
  const std::size_t m = design.size();
  const std::size_t p = design[0].size();
  const int facets = opts.polygon_facets;
  if (facets < 3) throw std::invalid_argument("polygon surrogate needs >= 3 facets");
  const double sec = 1.0 / std::cos(kPi / facets);

  LpProblem lp;
  const std::size_t s_base = 4 * p;
  const std::size_t w_base = 4 * p + m;
  lp.num_vars = static_cast<int>(spectral ? 4 * p + m + p : 4 * p + m);
  lp.objective.assign(lp.num_vars, 0.0);
  if (spectral) {
    for (std::size_t j = 0; j < p; ++j) lp.objective[w_base + j] = 1.0;
  } else {
    for (std::size_t i = 0; i < m; ++i) lp.objective[s_base + i] = 1.0;
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (int t = 0; t < facets; ++t) {
      const double ct = sec * std::cos(2.0 * kPi * t / facets);
      const double st = sec * std::sin(2.0 * kPi * t / facets);
      // ct*Re(res_i) + st*Im(res_i) <= s_i with res = y - sum_j c_j X_ij.
      LpProblem::Row row;
      row.coeffs.assign(lp.num_vars, 0.0);
      for (std::size_t j = 0; j < p; ++j) {
        const cplx x = design[i][j];
        const double re_a = x.real(), im_a = x.imag();
        // Re(res) gains -re_a*a_j + im_a*b_j ; Im(res) gains -im_a*a_j - re_a*b_j.
        const double ca = -ct * re_a - st * im_a;
        const double cb = ct * im_a - st * re_a;
        row.coeffs[4 * j] = ca;
        row.coeffs[4 * j + 1] = -ca;
        row.coeffs[4 * j + 2] = cb;
        row.coeffs[4 * j + 3] = -cb;
      }
      row.coeffs[s_base + i] = -1.0;
      row.rel = Relation::kLe;
      // Constant part of the residual moves right:
      // coeff_terms - s_i <= -(ct*Re(y) + st*Im(y)).
      row.rhs = -(ct * obs[i].real() + st * obs[i].imag());
      lp.rows.push_back(std::move(row));
    }
  }
  if (spectral) {
    for (std::size_t j = 0; j < p; ++j) {
      for (int t = 0; t < facets; ++t) {
        const double ct = sec * std::cos(2.0 * kPi * t / facets);
        const double st = sec * std::sin(2.0 * kPi * t / facets);
        LpProblem::Row row;
        row.coeffs.assign(lp.num_vars, 0.0);
        row.coeffs[4 * j] = ct;
        row.coeffs[4 * j + 1] = -ct;
        row.coeffs[4 * j + 2] = st;
        row.coeffs[4 * j + 3] = -st;
        row.coeffs[w_base + j] = -1.0;
        row.rel = Relation::kLe;
        row.rhs = 0.0;
        lp.rows.push_back(std::move(row));
      }
    }
    LpProblem::Row bud;
    bud.coeffs.assign(lp.num_vars, 0.0);
    for (std::size_t i = 0; i < m; ++i) bud.coeffs[s_base + i] = 1.0;
    bud.rel = Relation::kLe;
    bud.rhs = budget;
    lp.rows.push_back(std::move(bud));
  }

  const LpSolution sol = solve_lp(lp, opts.lp);
  L1FitComplex out;
  out.status = sol.status;
  if (sol.status != LpStatus::kOptimal) return out;
  out.coeffs.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    out.coeffs[j] = cplx{sol.values[4 * j] - sol.values[4 * j + 1],
                         sol.values[4 * j + 2] - sol.values[4 * j + 3]};
  }
  out.objective = sol.objective;
  out.residual = residual_sum_complex(design, obs, out.coeffs);
  out.possibly_nonunique = sol.possibly_nonunique;
  return out;
}

}  // namespace

L1FitReal l1_regression(const std::vector<std::vector<double>>& design,
                        const std::vector<double>& obs, const L1FitOptions& opts) {
  check_shapes(design.size(), design.empty() ? 0 : design[0].size(), obs.size());
  const std::size_t m = design.size();
  const std::size_t p = design[0].size();
  LpProblem lp = real_core(design, obs);
  for (std::size_t i = 0; i < 2 * m; ++i) lp.objective[2 * p + i] = 1.0;
  return finish_real(design, obs, solve_lp(lp, opts.lp), p);
}

L1FitReal l1_spectral_min(const std::vector<std::vector<double>>& design,
                          const std::vector<double>& obs, double budget,
                          const L1FitOptions& opts, LpWarmState* warm) {
  check_shapes(design.size(), design.empty() ? 0 : design[0].size(), obs.size());
  if (budget < 0.0) throw std::invalid_argument("l1_spectral_min: negative budget");
  const std::size_t m = design.size();
  const std::size_t p = design[0].size();
  LpProblem lp = real_core(design, obs);
  for (std::size_t j = 0; j < 2 * p; ++j) lp.objective[j] = 1.0;
  LpProblem::Row bud;
  bud.coeffs.assign(lp.num_vars, 0.0);
  for (std::size_t i = 0; i < 2 * m; ++i) bud.coeffs[2 * p + i] = 1.0;
  bud.rel = Relation::kLe;
  bud.rhs = budget;
  lp.rows.push_back(std::move(bud));
  return finish_real(design, obs, solve_lp(lp, opts.lp, warm), p);
}

L1FitComplex l1_regression(const std::vector<std::vector<cplx>>& design,
                           const std::vector<cplx>& obs, const L1FitOptions& opts) {
  check_shapes(design.size(), design.empty() ? 0 : design[0].size(), obs.size());
  if (opts.surrogate == SurrogateNorm::kPolygon)
    return polygon_solve(design, obs, opts, /*spectral=*/false, 0.0);
  std::vector<std::vector<double>> rdesign;
  std::vector<double> robs;
  realify(design, obs, rdesign, robs);
  return from_real(design, obs, l1_regression(rdesign, robs, opts));
}

L1FitComplex l1_spectral_min(const std::vector<std::vector<cplx>>& design,
                             const std::vector<cplx>& obs, double budget,
                             const L1FitOptions& opts, LpWarmState* warm) {
  check_shapes(design.size(), design.empty() ? 0 : design[0].size(), obs.size());
  if (opts.surrogate == SurrogateNorm::kPolygon)
    return polygon_solve(design, obs, opts, /*spectral=*/true, budget);
  std::vector<std::vector<double>> rdesign;
  std::vector<double> robs;
  realify(design, obs, rdesign, robs);
  return from_real(design, obs, l1_spectral_min(rdesign, robs, budget, opts, warm));
}

}  // namespace rsfft
