#include "rsfft/decode.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace rsfft {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void DecodeConfig::validate() const {
  if (k < 1) throw std::invalid_argument("DecodeConfig: k must be >= 1");
  if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("DecodeConfig: delta in (0, 1/2]");
  if (eta <= 0.0) throw std::invalid_argument("DecodeConfig: eta must be > 0");
  if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("DecodeConfig: gamma in (0,1)");
  if (sample_constant <= 0.0 && m_override <= 0)
    throw std::invalid_argument("DecodeConfig: sample_constant must be > 0");
}

long long DecodeConfig::sample_count(std::size_t num_characters) const {
  if (m_override > 0) return m_override;
  const double t = std::max<double>(2.0, static_cast<double>(num_characters));
  const double m = sample_constant * static_cast<double>(k) * k * std::log(t) *
                   std::log(1.0 / gamma) / (delta * delta);
  return std::max<long long>(static_cast<long long>(std::ceil(m)), 2 * k);
}

std::vector<std::vector<double>> boolean_design(const std::vector<std::uint64_t>& characters,
                                                const std::vector<std::uint64_t>& points) {
  std::vector<std::vector<double>> design(points.size(),
                                          std::vector<double>(characters.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < characters.size(); ++j)
      design[i][j] = (std::popcount(characters[j] & points[i]) & 1) ? -1.0 : 1.0;
  return design;
}

std::vector<std::vector<cplx>> cyclic_design(std::int64_t modulus,
                                             const std::vector<std::int64_t>& points) {
  std::vector<std::vector<cplx>> design(points.size(),
                                        std::vector<cplx>(static_cast<std::size_t>(modulus)));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::int64_t l = 0; l < modulus; ++l) {
      const double ang = kTwoPi * static_cast<double>(l) * static_cast<double>(points[i]) /
                         static_cast<double>(modulus);
      design[i][static_cast<std::size_t>(l)] = cplx{std::cos(ang), std::sin(ang)};
    }
  }
  return design;
}

namespace {

// One budget step: spectral-min LP, top-k truncation, LAD refit.
// Works on the realified view so one code path serves both domains.
struct StepOutcome {
  SweepDiag diag;
  std::vector<std::size_t> support;
  std::vector<double> dense_coeffs;  // per character (real) or per (re,im) pair
};

// Refits repeat across budgets whenever the truncated support repeats, so
// they are memoized per decode.
template <typename Design>
struct RefitCache {
  std::map<std::vector<std::size_t>, std::pair<double, std::vector<double>>> done;
};

template <typename Design, typename Obs, typename Magnitude>
StepOutcome sweep_step(const Design& design, const Obs& obs, double budget, int k,
                       const L1FitOptions& fit, const Magnitude& coeff_mag,
                       std::size_t num_chars, LpWarmState* warm, RefitCache<Design>* cache) {
  StepOutcome out;
  out.diag.delta_budget = budget;

  const auto lp = l1_spectral_min(design, obs, budget, fit, warm);
  out.diag.lp_status = lp.status;
  out.diag.lp_iterations = lp.lp_iterations;
  if (lp.status != LpStatus::kOptimal) return out;
  out.diag.lp_objective = lp.objective;

  // k largest magnitudes; ties to the numerically smaller character index.
  std::vector<std::size_t> order(num_chars);
  for (std::size_t j = 0; j < num_chars; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = coeff_mag(lp, a), mb = coeff_mag(lp, b);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  for (std::size_t j = 0; j < order.size() && static_cast<int>(out.support.size()) < k; ++j) {
    if (coeff_mag(lp, order[j]) > 0.0) out.support.push_back(order[j]);
  }
  std::sort(out.support.begin(), out.support.end());
  if (out.support.empty()) {
    // All-zero recovery is a legitimate candidate (residual of the zero fit).
    out.diag.usable = true;
    double r = 0.0;
    for (const auto& y : obs) r += std::abs(y);
    out.diag.refit_residual = r;
    return out;
  }

  // Refit on the chosen support (memoized).
  if (cache) {
    const auto hit = cache->done.find(out.support);
    if (hit != cache->done.end()) {
      out.diag.usable = true;
      out.diag.refit_residual = hit->second.first;
      out.diag.support = out.support;
      out.dense_coeffs = hit->second.second;
      return out;
    }
  }
  Design sub(design.size());
  for (std::size_t i = 0; i < design.size(); ++i) {
    sub[i].reserve(out.support.size());
    for (std::size_t j : out.support) sub[i].push_back(design[i][j]);
  }
  const auto refit = l1_regression(sub, obs, fit);
  if (refit.status != LpStatus::kOptimal) return out;
  out.diag.usable = true;
  out.diag.refit_residual = refit.residual;
  out.diag.support = out.support;
  for (std::size_t j = 0; j < out.support.size(); ++j) {
    if constexpr (std::is_same_v<typename Design::value_type, std::vector<double>>) {
      out.dense_coeffs.push_back(refit.coeffs[j]);
    } else {
      out.dense_coeffs.push_back(refit.coeffs[j].real());
      out.dense_coeffs.push_back(refit.coeffs[j].imag());
    }
  }
  if (cache) cache->done.emplace(out.support, std::make_pair(out.diag.refit_residual, out.dense_coeffs));
  return out;
}

std::vector<double> budget_grid(double upper, double sigma) {
  std::vector<double> grid;
  const long long steps = static_cast<long long>(std::floor(upper / sigma + 1e-9));
  grid.reserve(static_cast<std::size_t>(steps + 1));
  for (long long t = 0; t <= steps; ++t) grid.push_back(static_cast<double>(t) * sigma);
  return grid;
}

}  // namespace

BooleanDecodeResult linear_decode_boolean(const BooleanQueryFn& query, int ell,
                                          const std::vector<std::uint64_t>& characters,
                                          const DecodeConfig& cfg, Rng rng) {
  cfg.validate();
  if (ell < 1 || ell > 30) throw std::invalid_argument("linear_decode_boolean: bad ell");
  if (characters.size() < static_cast<std::size_t>(cfg.k))
    throw std::invalid_argument("linear_decode_boolean: |T| < k");

  BooleanDecodeResult res;
  res.m = cfg.sample_count(characters.size());
  const std::uint64_t domain = std::uint64_t{1} << ell;
  const double clamp = 1e6 * (1.0 + cfg.eta * cfg.k);

  res.samples.reserve(static_cast<std::size_t>(res.m));
  res.observations.reserve(static_cast<std::size_t>(res.m));
  for (long long i = 0; i < res.m; ++i) {
    const std::uint64_t x = rng.below(domain);
    double y = query(FreqVec(x, ell));
    if (std::abs(y) > clamp) {
      y = std::clamp(y, -clamp, clamp);
      res.clamped = true;
    }
    res.samples.push_back(x);
    res.observations.push_back(y);
  }

  const auto design = boolean_design(characters, res.samples);
  double y_abs_sum = 0.0;
  for (double y : res.observations) y_abs_sum += std::abs(y);
  const double upper = y_abs_sum + cfg.eta * static_cast<double>(res.m);
  const double sigma =
      cfg.sigma > 0.0 ? cfg.sigma : static_cast<double>(res.m) * cfg.eta * cfg.delta / 100.0;
  const auto budgets = budget_grid(upper, sigma);

  const auto mag = [](const L1FitReal& lp, std::size_t j) { return std::abs(lp.coeffs[j]); };
  // The full-span least-absolute-deviations residual is the feasibility
  // threshold of the budget constraint; smaller budgets are infeasible and
  // are skipped without a phase-1 proof each.
  const auto lad = l1_regression(design, res.observations, cfg.fit);
  const double feasible_from =
      lad.status == LpStatus::kOptimal ? lad.residual : 0.0;
  // Sequential sweep; each solve warm-starts from the previous basis and the
  // budget change is absorbed by dual-simplex reoptimization.
  std::vector<StepOutcome> outcomes(budgets.size());
  LpWarmState warm;
  RefitCache<std::vector<std::vector<double>>> cache;
  for (std::size_t t = 0; t < budgets.size(); ++t) {
    if (budgets[t] < feasible_from * (1.0 - 1e-9) - 1e-9) {
      outcomes[t].diag.delta_budget = budgets[t];
      outcomes[t].diag.lp_status = LpStatus::kInfeasible;
      continue;
    }
    outcomes[t] = sweep_step(design, res.observations, budgets[t], cfg.k, cfg.fit, mag,
                             characters.size(), &warm, &cache);
  }

  std::ptrdiff_t best = -1;
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(outcomes.size()); ++t) {
    res.sweep.push_back(outcomes[static_cast<std::size_t>(t)].diag);
    if (!outcomes[static_cast<std::size_t>(t)].diag.usable) continue;
    if (best < 0 || outcomes[static_cast<std::size_t>(t)].diag.refit_residual <
                        outcomes[static_cast<std::size_t>(best)].diag.refit_residual - 1e-12)
      best = t;
  }
  res.spectrum = BooleanSpectrum(ell);
  if (best < 0) {
    res.decode_failed = true;
    return res;
  }
  const auto& chosen = outcomes[static_cast<std::size_t>(best)];
  res.delta_star = chosen.diag.delta_budget;
  for (std::size_t j = 0; j < chosen.support.size(); ++j)
    res.spectrum.set(characters[chosen.support[j]], chosen.dense_coeffs[j]);
  return res;
}

CyclicDecodeResult linear_decode_cyclic(const CyclicQueryFn& query, std::int64_t modulus,
                                        const DecodeConfig& cfg, Rng rng) {
  cfg.validate();
  if (modulus < 2) throw std::invalid_argument("linear_decode_cyclic: modulus must be >= 2");

  CyclicDecodeResult res;
  res.m = std::min<long long>(cfg.sample_count(static_cast<std::size_t>(modulus)), modulus);
  const double clamp = 1e6 * (1.0 + cfg.eta * cfg.k);

  const auto picks = rng.distinct(static_cast<std::uint64_t>(res.m),
                                  static_cast<std::uint64_t>(modulus));
  res.samples.assign(picks.begin(), picks.end());
  res.observations.reserve(res.samples.size());
  for (std::int64_t x : res.samples) {
    cplx y = query(x);
    const double m = std::abs(y);
    if (m > clamp) {
      y *= clamp / m;
      res.clamped = true;
    }
    res.observations.push_back(y);
  }

  const auto design = cyclic_design(modulus, res.samples);
  double y_abs_sum = 0.0;
  for (const cplx& y : res.observations) y_abs_sum += std::abs(y);
  const double upper = y_abs_sum + cfg.eta * static_cast<double>(res.m);
  const double sigma =
      cfg.sigma > 0.0 ? cfg.sigma : static_cast<double>(res.m) * cfg.eta * cfg.delta / 100.0;
  const auto budgets = budget_grid(upper, sigma);

  const auto mag = [](const L1FitComplex& lp, std::size_t j) { return std::abs(lp.coeffs[j]); };
  const auto lad = l1_regression(design, res.observations, cfg.fit);
  const double feasible_from =
      lad.status == LpStatus::kOptimal ? lad.residual : 0.0;
  std::vector<StepOutcome> outcomes(budgets.size());
  LpWarmState warm;
  RefitCache<std::vector<std::vector<cplx>>> cache;
  for (std::size_t t = 0; t < budgets.size(); ++t) {
    if (budgets[t] < feasible_from * (1.0 - 1e-9) - 1e-9) {
      outcomes[t].diag.delta_budget = budgets[t];
      outcomes[t].diag.lp_status = LpStatus::kInfeasible;
      continue;
    }
    outcomes[t] = sweep_step(design, res.observations, budgets[t], cfg.k, cfg.fit, mag,
                             static_cast<std::size_t>(modulus), &warm, &cache);
  }

  std::ptrdiff_t best = -1;
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(outcomes.size()); ++t) {
    res.sweep.push_back(outcomes[static_cast<std::size_t>(t)].diag);
    if (!outcomes[static_cast<std::size_t>(t)].diag.usable) continue;
    if (best < 0 || outcomes[static_cast<std::size_t>(t)].diag.refit_residual <
                        outcomes[static_cast<std::size_t>(best)].diag.refit_residual - 1e-12)
      best = t;
  }
  res.spectrum = CyclicSpectrum(modulus);
  if (best < 0) {
    res.decode_failed = true;
    return res;
  }
  const auto& chosen = outcomes[static_cast<std::size_t>(best)];
  res.delta_star = chosen.diag.delta_budget;
  for (std::size_t j = 0; j < chosen.support.size(); ++j) {
    res.spectrum.set(static_cast<std::int64_t>(chosen.support[j]),
                     cplx{chosen.dense_coeffs[2 * j], chosen.dense_coeffs[2 * j + 1]});
  }
  return res;
}

BruteforceResult k_sparse_bruteforce(const std::vector<std::vector<double>>& design,
                                     const std::vector<double>& obs, int k,
                                     std::size_t max_supports, const L1FitOptions& opts) {
  if (design.empty()) throw std::invalid_argument("k_sparse_bruteforce: empty design");
  const std::size_t q = design[0].size();
  if (k < 1 || static_cast<std::size_t>(k) > q)
    throw std::invalid_argument("k_sparse_bruteforce: bad k");

  // C(q, k) with overflow guard against the enumeration cap.
  double combos = 1.0;
  for (int j = 0; j < k; ++j) combos *= static_cast<double>(q - j) / (j + 1);
  if (combos > static_cast<double>(max_supports))
    throw std::invalid_argument("k_sparse_bruteforce: enumeration-size guard exceeded");

  std::vector<std::size_t> idx(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) idx[static_cast<std::size_t>(j)] = static_cast<std::size_t>(j);

  BruteforceResult best;
  best.residual = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> sub(design.size(), std::vector<double>(k));
  for (;;) {
    for (std::size_t i = 0; i < design.size(); ++i)
      for (int j = 0; j < k; ++j) sub[i][static_cast<std::size_t>(j)] = design[i][idx[static_cast<std::size_t>(j)]];
    const auto fit = l1_regression(sub, obs, opts);
    if (fit.status == LpStatus::kOptimal && fit.residual < best.residual - 1e-12) {
      best.residual = fit.residual;
      best.support = idx;
      best.coeffs.assign(q, 0.0);
      for (int j = 0; j < k; ++j) best.coeffs[idx[static_cast<std::size_t>(j)]] = fit.coeffs[static_cast<std::size_t>(j)];
    }
    // Next combination in ascending lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == q - static_cast<std::size_t>(k - pos)) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  if (!std::isfinite(best.residual))
    throw std::runtime_error("k_sparse_bruteforce: every support fit failed");
  return best;
}

}  // namespace rsfft
