#include "rsfft/lowdeg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsfft {

MonomialBasis::MonomialBasis(int n, int d) : n_(n), d_(std::min(d, n)) {
  if (n < 1 || n > 30) throw std::invalid_argument("MonomialBasis: n out of range");
  if (d < 0) throw std::invalid_argument("MonomialBasis: negative degree");
  for (int w = 0; w <= d_; ++w) {
    // All weight-w subsets in ascending packed order.
    if (w == 0) {
      freqs_.push_back(0);
      continue;
    }
    std::uint64_t v = (std::uint64_t{1} << w) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (v < limit) {
      freqs_.push_back(v);
      // Next same-weight value (Gosper's hack); ascending by construction.
      const std::uint64_t c = v & (~v + 1);
      const std::uint64_t r = v + c;
      if (r >= limit) break;
      v = (((r ^ v) >> 2) / c) | r;
    }
  }
}

std::vector<double> monomial_features(const FreqVec& x, const MonomialBasis& basis) {
  if (x.n != basis.n()) throw std::invalid_argument("monomial_features: length mismatch");
  std::vector<double> out(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    out[j] = (std::popcount(basis.freqs()[j] & x.bits) & 1) ? -1.0 : 1.0;
  return out;
}

long long LowDegConfig::sample_count(std::size_t basis_size) const {
  if (m_override > 0) return m_override;
  const double nn = static_cast<double>(basis_size);
  const double m = sample_constant * nn * std::log(std::max(2.0, nn)) / (delta * delta);
  return std::max<long long>(static_cast<long long>(std::ceil(m)),
                             static_cast<long long>(basis_size));
}

double LowDegConfig::rho_cap() const {
  return 1.0 / (4.0 * std::pow(9.0, d)) - delta;
}

LowDegResult recover_low_degree(const BooleanOracle& oracle, const LowDegConfig& cfg) {
  const int n = oracle.n();
  if (n != cfg.n) throw std::invalid_argument("recover_low_degree: oracle dimension mismatch");
  const MonomialBasis basis(cfg.n, cfg.d);

  LowDegResult res;
  res.m = cfg.sample_count(basis.size());
  const std::uint64_t mask = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);

  Rng rng = Rng(cfg.seed).derived(0x10de6);
  auto stream = oracle.stream(0x10de6);
  std::vector<std::uint64_t> points;
  std::vector<double> obs;
  points.reserve(static_cast<std::size_t>(res.m));
  for (long long i = 0; i < res.m; ++i) {
    const std::uint64_t x = rng.next_u64() & mask;
    points.push_back(x);
    obs.push_back(stream.query(FreqVec(x, n)));
  }
  res.sample_points = points;

  const auto design = boolean_design(basis.freqs(), points);
  const auto fit = l1_regression(design, obs, cfg.fit);
  res.spectrum = BooleanSpectrum(n);
  if (fit.status != LpStatus::kOptimal) {
    res.failed = true;
    return res;
  }
  res.residual = fit.residual;
  for (std::size_t j = 0; j < basis.size(); ++j) res.spectrum.set(basis.freqs()[j], fit.coeffs[j]);
  return res;
}

HypercontractiveBound hypercontractive_lower_bound(const std::vector<double>& coeffs,
                                                   const MonomialBasis& basis,
                                                   std::uint64_t sample_seed,
                                                   long long samples) {
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("hypercontractive_lower_bound: coefficient size mismatch");
  HypercontractiveBound out;
  double norm_sq = 0.0;
  for (double c : coeffs) norm_sq += c * c;
  out.coeff_norm2 = std::sqrt(norm_sq);

  const int n = basis.n();
  if (n <= 20) {
    // Exact expectation via the dense inverse transform.
    BooleanSpectrum spec(n);
    for (std::size_t j = 0; j < basis.size(); ++j) spec.set(basis.freqs()[j], coeffs[j]);
    const auto table = boolean_table(spec);
    double acc = 0.0;
    for (double v : table) acc += std::abs(v);
    out.mean_abs = acc / static_cast<double>(table.size());
    out.exact = true;
  } else {
    // Stratified sampling (strata on the low bits) with a reported standard error.
    Rng rng = Rng(sample_seed).derived(0xab50);
    const std::uint64_t mask = ~std::uint64_t{0} >> (64 - n);
    const int strata_bits = std::min(10, n);
    const std::uint64_t strata = std::uint64_t{1} << strata_bits;
    double acc = 0.0, acc2 = 0.0;
    BooleanSpectrum spec(n);
    for (std::size_t j = 0; j < basis.size(); ++j) spec.set(basis.freqs()[j], coeffs[j]);
    for (long long i = 0; i < samples; ++i) {
      const std::uint64_t low = static_cast<std::uint64_t>(i) % strata;
      const std::uint64_t x = ((rng.next_u64() << strata_bits) | low) & mask;
      const double v = std::abs(boolean_eval(spec, FreqVec(x, n)));
      acc += v;
      acc2 += v * v;
    }
    const double mean = acc / static_cast<double>(samples);
    const double var = std::max(0.0, acc2 / static_cast<double>(samples) - mean * mean);
    out.mean_abs = mean;
    out.std_error = std::sqrt(var / static_cast<double>(samples));
    out.exact = false;
  }
  out.ratio = out.coeff_norm2 > 0.0 ? out.mean_abs / out.coeff_norm2 : 0.0;
  const double lower = std::pow(3.0, -basis.degree());
  const double slack = out.exact ? 1e-9 : 3.0 * out.std_error / std::max(out.coeff_norm2, 1e-300);
  out.within_bounds = out.ratio >= lower - slack && out.ratio <= 1.0 + slack;
  return out;
}

EuclideanSectionReport euclidean_section_check(const std::vector<double>& coeffs,
                                               const MonomialBasis& basis,
                                               const std::vector<std::uint64_t>& points,
                                               double rho, double delta) {
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("euclidean_section_check: coefficient size mismatch");
  const std::size_t m = points.size();
  const double rho_m = rho * static_cast<double>(m);
  if (rho_m < 1.0) throw std::invalid_argument("euclidean_section_check: rho*m < 1");
  const auto s_size = static_cast<std::size_t>(std::floor(rho_m));

  BooleanSpectrum spec(basis.n());
  for (std::size_t j = 0; j < basis.size(); ++j) spec.set(basis.freqs()[j], coeffs[j]);

  std::vector<double> mags(m);
  for (std::size_t i = 0; i < m; ++i)
    mags[i] = std::abs(boolean_eval(spec, FreqVec(points[i], basis.n())));
  std::sort(mags.begin(), mags.end(), std::greater<double>());

  EuclideanSectionReport rep;
  for (std::size_t i = 0; i < m; ++i) {
    rep.total_sum += mags[i];
    if (i < s_size) rep.worst_subset_sum += mags[i];
  }
  const double rest = rep.total_sum - rep.worst_subset_sum;

  // Exact expectation over the cube for the mean-gap clause.
  double mean_abs;
  {
    const auto table = boolean_table(spec);
    double acc = 0.0;
    for (double v : table) acc += std::abs(v);
    mean_abs = acc / static_cast<double>(table.size());
  }
  double norm_sq = 0.0;
  for (double c : coeffs) norm_sq += c * c;

  rep.half_mass_ok = rep.worst_subset_sum <= (0.5 - delta) * rep.total_sum + 1e-12;
  rep.mean_gap_ok =
      rep.worst_subset_sum + delta * static_cast<double>(m) * mean_abs <= rest + 1e-12;
  rep.coeff_gap_ok = rep.worst_subset_sum + delta * std::pow(3.0, -basis.degree()) *
                                                static_cast<double>(m) * std::sqrt(norm_sq) <=
                     rest + 1e-12;
  return rep;
}

}  // namespace rsfft
