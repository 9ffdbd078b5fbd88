#include "doctest.h"
#include "rsfft/boolean_sfft.hpp"

#include <cmath>
#include <map>

#include "rsfft/rng.hpp"

using namespace rsfft;

namespace {

// Claim-style closed form for the bucket spectrum: the sum of signed source
// coefficients over frequencies whose hashed prefix matches the bucket.
std::map<std::uint64_t, double> bucket_formula(const BooleanSpectrum& f, const F2Matrix& a,
                                               const FreqVec& b, int ell) {
  std::map<std::uint64_t, double> out;
  const F2Matrix at = a.transpose();
  const std::uint64_t mask = (std::uint64_t{1} << ell) - 1;
  for (const auto& [bits, c] : f.entries()) {
    const FreqVec xi(bits, f.n());
    const std::uint64_t bucket = at.apply(xi).bits & mask;
    const double sign = dot_f2(b, xi) ? -1.0 : 1.0;
    out[bucket] += sign * c;
  }
  for (auto it = out.begin(); it != out.end();) {
    if (std::abs(it->second) < 1e-12)
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

BooleanSfftConfig fast_cfg(int k, std::uint64_t seed) {
  BooleanSfftConfig cfg;
  cfg.k = k;
  cfg.delta = 0.25;
  cfg.eta = 1.0;
  cfg.ell_override = 5;
  cfg.inner.m_override = 48;
  cfg.inner.sigma = 2.0;
  cfg.refit_m_override = 96;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("boolean_sfft");

TEST_CASE("bucket oracle: constant function lands in the zero bucket") {
  const int n = 5, ell = 3;
  BooleanSpectrum truth(n);
  truth.set(0, 0.75);
  NoiseParams quiet;
  BooleanOracle oracle(truth, quiet);
  Rng rng(70);
  const auto a = random_invertible_f2(n, rng);
  REQUIRE(a.has_value());

  auto z = filtered_bucket_oracle(oracle.stream(1), *a, FreqVec(0, n), ell);
  // Transform the reduced-domain function directly.
  std::vector<double> table(1 << ell);
  for (std::uint64_t u = 0; u < table.size(); ++u) table[u] = z(FreqVec(u, ell));
  const auto spec = boolean_dft(table);
  CHECK(spec.sparsity() == 1);
  CHECK(spec.coeff(0) == doctest::Approx(0.75));
}

TEST_CASE("bucket oracle: single character lands at its hashed prefix with a sign twist") {
  const int n = 6, ell = 4;
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    BooleanSpectrum truth(n);
    const std::uint64_t f0 = rng.below(64);
    truth.set(f0, 1.5);
    NoiseParams quiet;
    BooleanOracle oracle(truth, quiet);
    const auto a = random_invertible_f2(n, rng);
    REQUIRE(a.has_value());
    const FreqVec b(rng.below(64), n);

    auto z = filtered_bucket_oracle(oracle.stream(1), *a, b, ell);
    std::vector<double> table(1 << ell);
    for (std::uint64_t u = 0; u < table.size(); ++u) table[u] = z(FreqVec(u, ell));
    const auto spec = boolean_dft(table);

    const FreqVec xi(f0, n);
    const std::uint64_t bucket = a->transpose().apply(xi).bits & 0xf;
    const double expected = (dot_f2(b, xi) ? -1.5 : 1.5);
    CHECK(spec.sparsity() == 1);
    CHECK(spec.coeff(bucket) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("bucket spectra match the collision-sum formula") {
  Rng rng(72);
  const int n = 6, ell = 4;
  for (int trial = 0; trial < 10; ++trial) {
    BooleanSpectrum truth(n);
    for (std::uint64_t xi : rng.distinct(3, 64)) truth.set(xi, rng.uniform(-2.0, 2.0));
    NoiseParams quiet;
    BooleanOracle oracle(truth, quiet);
    const auto a = random_invertible_f2(n, rng);
    REQUIRE(a.has_value());
    const FreqVec b(rng.below(64), n);

    auto z = filtered_bucket_oracle(oracle.stream(1), *a, b, ell);
    std::vector<double> table(1 << ell);
    for (std::uint64_t u = 0; u < table.size(); ++u) table[u] = z(FreqVec(u, ell));
    const auto spec = boolean_dft(table);
    const auto expected = bucket_formula(truth, *a, b, ell);

    for (std::uint64_t bucket = 0; bucket < (1u << ell); ++bucket) {
      const auto it = expected.find(bucket);
      const double want = it == expected.end() ? 0.0 : it->second;
      CHECK(spec.coeff(bucket) == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("bucket spectra also equal the subspace-filter convolution form") {
  // Dense check on a small cube: w(x) = f(Ax+b) * H(x) with the scaled
  // subspace indicator has transform equal to the lifted oracle's transform
  // at every prefix, for every suffix.
  Rng rng(73);
  const int n = 4, ell = 2;
  BooleanSpectrum truth(n);
  for (std::uint64_t xi : rng.distinct(2, 16)) truth.set(xi, rng.uniform(-1.0, 1.0));
  const auto a = random_invertible_f2(n, rng);
  REQUIRE(a.has_value());
  const FreqVec b(rng.below(16), n);

  // Dense filtered function over the full cube.
  std::vector<double> dense(16, 0.0);
  const double scale = std::pow(2.0, n - ell);
  for (std::uint64_t x = 0; x < 16; ++x) {
    if ((x >> ell) != 0) continue;  // H kills points outside the subspace
    dense[x] = scale * boolean_eval(truth, add_f2(a->apply(FreqVec(x, n)), b));
  }
  const auto full = boolean_dft(dense);

  NoiseParams quiet;
  BooleanOracle oracle(truth, quiet);
  auto z = filtered_bucket_oracle(oracle.stream(1), *a, b, ell);
  std::vector<double> reduced(1 << ell);
  for (std::uint64_t u = 0; u < reduced.size(); ++u) reduced[u] = z(FreqVec(u, ell));
  const auto lifted = boolean_dft(reduced);

  // The full transform depends only on the prefix; the omitted 2^{n-ell}
  // scale on the lifted oracle matches the dense H normalization.
  for (std::uint64_t xi = 0; xi < 16; ++xi) {
    const std::uint64_t prefix = xi & 0x3;
    CHECK(full.coeff(xi) == doctest::Approx(lifted.coeff(prefix)).epsilon(1e-9));
  }
}

TEST_CASE("isolation checks") {
  Rng rng(74);
  const auto a = random_invertible_f2(6, rng);
  REQUIRE(a.has_value());

  CHECK(check_isolation(*a, {FreqVec(5, 6)}, 4) == std::vector<bool>{true});

  // Two frequencies with equal hashed prefixes are mutually non-isolated.
  std::vector<FreqVec> freqs{FreqVec(1, 6), FreqVec(2, 6)};
  const auto at = a->transpose();
  const std::uint64_t mask = 0xf;
  // Craft the second frequency to collide by solving (A^T x) prefix match.
  for (std::uint64_t cand = 0; cand < 64; ++cand) {
    if (cand == 1) continue;
    if ((at.apply(FreqVec(cand, 6)).bits & mask) == (at.apply(FreqVec(1, 6)).bits & mask)) {
      freqs[1] = FreqVec(cand, 6);
      break;
    }
  }
  if ((at.apply(freqs[1]).bits & mask) == (at.apply(freqs[0]).bits & mask)) {
    const auto iso = check_isolation(*a, freqs, 4);
    CHECK(iso == std::vector<bool>{false, false});
  }
}

TEST_CASE("isolation rate over random hash matrices is near one") {
  Rng rng(75);
  const int n = 10, ell = 9, k = 4, trials = 200;
  int all_isolated = 0;
  for (int t = 0; t < trials; ++t) {
    std::vector<FreqVec> freqs;
    for (std::uint64_t bits : rng.distinct(k, 1u << n)) freqs.emplace_back(bits, n);
    const auto a = random_invertible_f2(n, rng);
    REQUIRE(a.has_value());
    const auto iso = check_isolation(*a, freqs, ell);
    bool all = true;
    for (bool b : iso) all = all && b;
    all_isolated += all ? 1 : 0;
  }
  const double bound = 1.0 - (k * (k - 1) / 2.0) * std::pow(2.0, -ell) - 0.05;
  CHECK(static_cast<double>(all_isolated) / trials >= bound);
}

TEST_CASE("zero signal yields the zero spectrum") {
  BooleanSpectrum truth(5);
  NoiseParams quiet;
  quiet.seed = 76;
  BooleanOracle oracle(truth, quiet);
  const auto res = boolean_sfft(oracle, fast_cfg(1, 77));
  CHECK(res.spectrum.sparsity() == 0);
}

TEST_CASE("noiseless 1-sparse end to end") {
  Rng rng(78);
  for (int trial = 0; trial < 5; ++trial) {
    BooleanSpectrum truth(5);
    const std::uint64_t f0 = rng.below(32);
    const double c0 = rng.sign() * rng.uniform(1.0, 2.0);
    truth.set(f0, c0);
    NoiseParams quiet;
    quiet.seed = 79 + static_cast<std::uint64_t>(trial);
    BooleanOracle oracle(truth, quiet);
    const auto res = boolean_sfft(oracle, fast_cfg(1, 80 + static_cast<std::uint64_t>(trial)));
    REQUIRE(!res.empty_list);
    CHECK(res.spectrum.sparsity() == 1);
    CHECK(res.spectrum.coeff(f0) == doctest::Approx(c0).epsilon(1e-6));
  }
}

TEST_CASE("noiseless sign decoding finalizes exactly the true frequencies") {
  Rng rng(81);
  BooleanSpectrum truth(6);
  for (std::uint64_t xi : rng.distinct(3, 64)) truth.set(xi, rng.sign() * rng.uniform(1.0, 2.0));
  NoiseParams quiet;
  quiet.seed = 82;
  BooleanOracle oracle(truth, quiet);

  BooleanSfftConfig cfg = fast_cfg(3, 83);
  cfg.ell_override = 6;  // full-width hash: isolation is guaranteed
  const auto res = boolean_sfft(oracle, cfg);
  REQUIRE(!res.empty_list);
  REQUIRE(res.finalized.size() == truth.sparsity());
  for (const auto& f : res.finalized) CHECK(truth.coeff(f.bits) != 0.0);
  for (const auto& [xi, c] : truth.entries())
    CHECK(res.spectrum.coeff(xi) == doctest::Approx(c).epsilon(1e-6));
}

TEST_CASE("query accounting stays within the budget") {
  BooleanSpectrum truth(5);
  truth.set(3, 1.0);
  NoiseParams quiet;
  quiet.seed = 84;
  BooleanOracle oracle(truth, quiet);
  const auto cfg = fast_cfg(1, 85);
  const auto res = boolean_sfft(oracle, cfg);
  const auto stats = oracle.stats();
  CHECK(stats.query_count == static_cast<std::uint64_t>(res.inner_m + res.refit_m));
  CHECK(res.inner_m <= 2LL * 5 * 48);
}

TEST_CASE("recovery under random outliers at a moderate rate") {
  int good = 0;
  const int trials = 3;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(86).derived(static_cast<std::uint64_t>(t));
    BooleanSpectrum truth(5);
    for (std::uint64_t xi : rng.distinct(2, 32)) truth.set(xi, rng.sign() * rng.uniform(1.0, 2.0));
    NoiseParams params;
    params.rho = 0.2;
    params.epsilon = 0.02;
    params.outlier = OutlierStrategy::kZero;
    params.seed = rng.next_u64();
    BooleanOracle oracle(truth, params);

    BooleanSfftConfig cfg = fast_cfg(2, rng.next_u64());
    cfg.ell_override = 5;
    cfg.inner.m_override = 96;
    cfg.inner.sigma = 8.0;
    cfg.refit_m_override = 128;
    const auto res = boolean_sfft(oracle, cfg);
    bool match = res.spectrum.sparsity() == truth.sparsity();
    if (match)
      for (const auto& [xi, c] : truth.entries())
        match = match && std::abs(res.spectrum.coeff(xi) - c) <= 1.0 / 3.0;
    good += match ? 1 : 0;
  }
  CHECK(good >= trials - 1);
}

TEST_SUITE_END();
