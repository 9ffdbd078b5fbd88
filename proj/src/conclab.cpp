#include "rsfft/conclab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsfft/boolean_sfft.hpp"
#include "rsfft/lowdeg.hpp"
#include "rsfft/torus_sfft.hpp"

namespace rsfft {

int FamilySampler::family_k() const {
  if (kind == FamilyKind::kDegree) {
    MonomialBasis basis(n, k_or_d);
    return static_cast<int>(basis.size());
  }
  return k_or_d;
}

BooleanSpectrum FamilySampler::sample(Rng& rng) const {
  if (n < 1 || n > 20) throw std::invalid_argument("FamilySampler: n out of range");
  const std::uint64_t domain = std::uint64_t{1} << n;
  switch (kind) {
    case FamilyKind::kSparse: {
      BooleanSpectrum h(n);
      for (std::uint64_t xi : rng.distinct(static_cast<std::uint64_t>(k_or_d), domain))
        h.set(xi, rng.sign() * rng.uniform(1.0, 2.0));
      return h;
    }
    case FamilyKind::kRelaxedSpread:
      return spread_vector_spectrum(n, k_or_d, rng);
    case FamilyKind::kDegree: {
      MonomialBasis basis(n, k_or_d);
      BooleanSpectrum h(n);
      for (std::uint64_t xi : basis.freqs()) h.set(xi, rng.normal());
      return h;
    }
  }
  throw std::logic_error("FamilySampler: unknown kind");
}

BooleanSpectrum single_character_spectrum(int n, std::uint64_t xi) {
  BooleanSpectrum h(n);
  h.set(xi, 1.0);
  return h;
}

BooleanSpectrum and_indicator_spectrum(int n, int vars) {
  if (vars < 1 || vars > n) throw std::invalid_argument("and_indicator_spectrum: bad arity");
  BooleanSpectrum h(n);
  const double scale = std::pow(0.5, vars);
  const std::uint64_t limit = std::uint64_t{1} << vars;
  for (std::uint64_t s = 0; s < limit; ++s) {
    const int parity = std::popcount(s) & 1;
    h.set(s, parity ? -scale : scale);
  }
  return h;
}

BooleanSpectrum spread_vector_spectrum(int n, int k, Rng& rng) {
  const std::uint64_t domain = std::uint64_t{1} << n;
  if (static_cast<std::uint64_t>(k) >= domain)
    throw std::invalid_argument("spread_vector_spectrum: k too large");
  const double big = 1.0 / std::sqrt(static_cast<double>(k));
  // Tail entries slightly under sqrt(k)/N keep the family inequality strict.
  const double small = std::sqrt(static_cast<double>(k)) / static_cast<double>(domain) *
                       (1.0 - 1e-9);
  const auto heavy = rng.distinct(static_cast<std::uint64_t>(k), domain);
  BooleanSpectrum h(n);
  std::size_t next_heavy = 0;
  for (std::uint64_t xi = 0; xi < domain; ++xi) {
    if (next_heavy < heavy.size() && heavy[next_heavy] == xi) {
      h.set(xi, rng.sign() * big);
      ++next_heavy;
    } else {
      h.set(xi, rng.sign() * small);
    }
  }
  return h;
}

FamilyMembership family_f_membership(const BooleanSpectrum& h, int k) {
  if (k < 1) throw std::invalid_argument("family_f_membership: k must be >= 1");
  FamilyMembership out;
  const double norm2 = h.norm2();
  if (norm2 == 0.0) return out;

  const double bound = 2.0 * std::sqrt(static_cast<double>(k));
  const double norm1 = h.norm1() / norm2;

  const auto table = boolean_table(h);
  double max_abs = 0.0, mean_abs = 0.0;
  for (double v : table) {
    max_abs = std::max(max_abs, std::abs(v));
    mean_abs += std::abs(v);
  }
  max_abs /= norm2;
  mean_abs /= norm2 * static_cast<double>(table.size());

  out.norm1_ratio = norm1 / bound;
  out.max_ratio = max_abs / bound;
  out.mean_ratio = mean_abs > 0.0 ? (1.0 / bound) / mean_abs : std::numeric_limits<double>::infinity();
  out.member = out.norm1_ratio <= 1.0 + 1e-9 && out.max_ratio <= 1.0 + 1e-9 &&
               out.mean_ratio <= 1.0 + 1e-9;
  return out;
}

DeviationReport ell1_deviation(const FamilySampler& sampler, long long m, int trials,
                               std::uint64_t seed, bool squared) {
  if (m < 1 || trials < 1) throw std::invalid_argument("ell1_deviation: bad m or trials");
  if (sampler.n > 16) throw std::invalid_argument("ell1_deviation: exact expectation needs n <= 16");
  DeviationReport rep;
  rep.m = m;
  rep.trials = trials;
  const std::uint64_t domain = std::uint64_t{1} << sampler.n;

  std::vector<double> devs(static_cast<std::size_t>(trials), 0.0);
  std::vector<int> skip(static_cast<std::size_t>(trials), 0);
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).derived(0xde71a7, static_cast<std::uint64_t>(t));
    const BooleanSpectrum h = sampler.sample(rng);
    const auto table = boolean_table(h);
    double expected = 0.0;
    for (double v : table) expected += squared ? v * v : std::abs(v);
    expected /= static_cast<double>(table.size());
    if (expected <= 0.0) {
      skip[static_cast<std::size_t>(t)] = 1;
      continue;
    }
    double acc = 0.0;
    for (long long i = 0; i < m; ++i) {
      const double v = table[rng.below(domain)];
      acc += squared ? v * v : std::abs(v);
    }
    const double target = static_cast<double>(m) * expected;
    devs[static_cast<std::size_t>(t)] = std::abs(acc - target) / target;
  }

  rep.deviations.clear();
  for (int t = 0; t < trials; ++t) {
    if (skip[static_cast<std::size_t>(t)]) {
      ++rep.skipped;
      continue;
    }
    rep.deviations.push_back(devs[static_cast<std::size_t>(t)]);
  }
  if (rep.deviations.empty()) return rep;
  std::sort(rep.deviations.begin(), rep.deviations.end());
  double sum = 0.0;
  for (double d : rep.deviations) sum += d;
  rep.mean = sum / static_cast<double>(rep.deviations.size());
  const auto quantile = [&](double q) {
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(rep.deviations.size() - 1));
    return rep.deviations[idx];
  };
  rep.p50 = quantile(0.50);
  rep.p95 = quantile(0.95);
  rep.max = rep.deviations.back();
  return rep;
}

double boolean_isolation_rate(int n, int ell, int k, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("boolean_isolation_rate: trials must be >= 1");
  const std::uint64_t domain = std::uint64_t{1} << n;
  long long good = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : good)
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).derived(0x150a, static_cast<std::uint64_t>(t));
    const auto freq_bits = rng.distinct(static_cast<std::uint64_t>(k), domain);
    std::vector<FreqVec> freqs;
    freqs.reserve(freq_bits.size());
    for (std::uint64_t b : freq_bits) freqs.emplace_back(b, n);
    const auto a = random_invertible_f2(n, rng);
    if (!a) continue;
    const auto isolated = check_isolation(*a, freqs, std::min(ell, n));
    bool all = true;
    for (bool b : isolated) all = all && b;
    if (all) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(trials);
}

double torus_isolation_rate(std::int64_t bandlimit, double prime_floor, int prime_pool,
                            int k, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("torus_isolation_rate: trials must be >= 1");
  const auto primes = prime_pool_above(prime_floor, prime_pool);
  const std::uint64_t n_freqs = static_cast<std::uint64_t>(2 * bandlimit + 1);
  long long good = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : good)
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).derived(0x150b, static_cast<std::uint64_t>(t));
    const auto offsets = rng.distinct(static_cast<std::uint64_t>(k), n_freqs);
    const std::int64_t b = primes[rng.below(primes.size())];
    bool all = true;
    for (std::size_t i = 0; i < offsets.size() && all; ++i) {
      for (std::size_t j = 0; j < offsets.size(); ++j) {
        if (i == j) continue;
        const std::int64_t xi = static_cast<std::int64_t>(offsets[i]) - bandlimit;
        const std::int64_t xj = static_cast<std::int64_t>(offsets[j]) - bandlimit;
        if ((((xi - xj) % b) + b) % b == 0) {
          all = false;
          break;
        }
      }
    }
    if (all) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(trials);
}

}  // namespace rsfft
