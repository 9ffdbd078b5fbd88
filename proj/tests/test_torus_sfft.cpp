#include "doctest.h"
#include "rsfft/torus_sfft.hpp"

#include <cmath>

#include "rsfft/rng.hpp"
#include "rsfft/spectrum.hpp"

using namespace rsfft;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::int64_t pos_mod(std::int64_t a, std::int64_t b) {
  const std::int64_t r = a % b;
  return r < 0 ? r + b : r;
}

TorusSfftConfig fast_cfg(std::int64_t F, int k, std::uint64_t seed) {
  TorusSfftConfig cfg;
  cfg.bandlimit = F;
  cfg.k = k;
  cfg.delta = 0.25;
  cfg.eta = 1.0;
  cfg.prime_floor = 20.0;
  cfg.prime_pool = 8;
  cfg.inner.m_override = 24;
  cfg.inner.sigma = 6.0;
  cfg.refit_m_override = 48;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("torus_sfft");

TEST_CASE("prime pool construction and selection") {
  const auto pool = prime_pool_above(10.0, 4);
  CHECK(pool == std::vector<std::int64_t>{11, 13, 17, 19});
  Rng rng(90);
  for (int t = 0; t < 20; ++t) {
    const std::int64_t b = pick_prime(10.0, 4, rng);
    CHECK((b == 11 || b == 13 || b == 17 || b == 19));
  }
  CHECK_THROWS(prime_pool_above(1e13, 10));
}

TEST_CASE("fixed congruent frequencies are never isolated") {
  // xi = 0 and xi = B collide mod B by construction.
  const std::int64_t b = 31;
  CHECK(pos_mod(0 - b, b) == 0);
}

TEST_CASE("random prime isolates random frequencies nearly always") {
  Rng rng(91);
  const std::int64_t F = 64;
  const int k = 3, trials = 500;
  const auto pool = prime_pool_above(2.0 * k * std::log2(2.0 * F), 64);
  int all_isolated = 0;
  for (int t = 0; t < trials; ++t) {
    const auto offs = rng.distinct(k, 2 * F + 1);
    const std::int64_t b = pool[rng.below(pool.size())];
    bool ok = true;
    for (std::size_t i = 0; i < offs.size() && ok; ++i)
      for (std::size_t j = i + 1; j < offs.size(); ++j)
        if (pos_mod(static_cast<std::int64_t>(offs[i]) - static_cast<std::int64_t>(offs[j]), b) ==
            0) {
          ok = false;
          break;
        }
    all_isolated += ok ? 1 : 0;
  }
  CHECK(static_cast<double>(all_isolated) / trials >= 0.99);
}

TEST_CASE("frequency hash bins match the congruence formula") {
  Rng rng(92);
  for (const std::int64_t b : {31LL, 61LL}) {
    for (int trial = 0; trial < 100; ++trial) {
      TorusSpectrum truth(64);
      for (std::uint64_t off : rng.distinct(3, 129))
        truth.set(static_cast<std::int64_t>(off) - 64,
                  cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
      const double t0 = rng.uniform01() / static_cast<double>(b);

      // Sample the grid exactly and transform.
      std::vector<cplx> z(static_cast<std::size_t>(b));
      for (std::int64_t i = 0; i < b; ++i)
        z[static_cast<std::size_t>(i)] =
            torus_eval(truth, t0 + static_cast<double>(i) / static_cast<double>(b));
      const auto spec = cyclic_dft(z);

      // Collision-sum formula.
      std::map<std::int64_t, cplx> expected;
      for (const auto& [xi, c] : truth.entries()) {
        const double ang = kTwoPi * static_cast<double>(xi) * t0;
        expected[pos_mod(xi, b)] += c * cplx{std::cos(ang), std::sin(ang)};
      }
      for (std::int64_t l = 0; l < b; ++l) {
        const auto it = expected.find(l);
        const cplx want = it == expected.end() ? cplx{0.0, 0.0} : it->second;
        CHECK(std::abs(spec.coeff(l) - want) < 1e-9);
      }
    }
  }
}

TEST_CASE("single character bins at its residue") {
  TorusSpectrum truth(8);
  truth.set(5, cplx{1.0, 0.0});
  std::vector<cplx> z(3);
  for (std::int64_t i = 0; i < 3; ++i)
    z[static_cast<std::size_t>(i)] = torus_eval(truth, static_cast<double>(i) / 3.0);
  const auto spec = cyclic_dft(z);
  CHECK(spec.sparsity() == 1);
  CHECK(std::abs(spec.coeff(2) - cplx{1.0, 0.0}) < 1e-9);  // 5 mod 3
}

TEST_CASE("phase_update basics") {
  // True offset r = 1 from apx = 0 with shift 1/8: gamma = pi/4, step 1.
  const double shift = 0.125;
  const cplx c{1.0, 0.0};
  const cplx cs{std::cos(kTwoPi * shift), std::sin(kTwoPi * shift)};
  const auto upd = phase_update(0, c, cs, shift);
  REQUIRE(upd.has_value());
  CHECK(*upd == 1);

  // Ratio 1 with a correct estimate leaves it unchanged.
  const auto same = phase_update(0, c, c, shift);
  REQUIRE(same.has_value());
  CHECK(*same == 0);

  CHECK(!phase_update(3, cplx{0.0, 0.0}, c, shift).has_value());
}

TEST_CASE("phase doubling pins an exact negative frequency") {
  // Simulate the loop exactly at one isolated bucket.
  const std::int64_t F = 64, xi = -37, b = 41;
  std::int64_t apx = 0;
  double shift = 1.0 / (4.0 * static_cast<double>(F));
  const int rounds = static_cast<int>(std::ceil(std::log2(2.0 * F))) + 1;
  for (int r = 0; r < rounds; ++r) {
    const cplx cz{1.0, 0.0};
    const cplx czs{std::cos(kTwoPi * xi * shift), std::sin(kTwoPi * xi * shift)};
    const auto upd = phase_update(apx, cz, czs, shift);
    REQUIRE(upd.has_value());
    apx = *upd;
    CHECK(std::abs(static_cast<double>(xi - apx)) <= 1.0 / (4.0 * shift) + 1e-9);
    shift *= 2.0;
  }
  CHECK(apx == xi);
  CHECK(pos_mod(xi, b) == pos_mod(apx, b));
}

TEST_CASE("zero signal decodes to the zero spectrum") {
  TorusSpectrum truth(16);
  NoiseParams quiet;
  quiet.seed = 93;
  TorusOracle oracle(truth, quiet);
  const auto res = torus_sfft(oracle, fast_cfg(16, 1, 94));
  CHECK(res.spectrum.sparsity() == 0);
}

TEST_CASE("noiseless 1-sparse recovery is exact and satisfies the bracket") {
  Rng rng(95);
  for (int trial = 0; trial < 3; ++trial) {
    const std::int64_t F = 16;
    TorusSpectrum truth(F);
    const std::int64_t xi = static_cast<std::int64_t>(rng.below(2 * F + 1)) - F;
    const double theta = rng.uniform(0.0, kTwoPi);
    truth.set(xi, cplx{1.3 * std::cos(theta), 1.3 * std::sin(theta)});
    NoiseParams quiet;
    quiet.seed = 96 + static_cast<std::uint64_t>(trial);
    TorusOracle oracle(truth, quiet);

    const auto res = torus_sfft(oracle, fast_cfg(F, 1, 97 + static_cast<std::uint64_t>(trial)));
    REQUIRE(!res.empty_support);
    REQUIRE(res.support == std::vector<std::int64_t>{xi});
    CHECK(std::abs(res.spectrum.coeff(xi) - truth.coeff(xi)) < 1e-6);

    // Instrumented induction invariant: every surviving bucket stays within
    // 1/(4 * shift) of the true frequency, every round.
    const std::int64_t bucket = pos_mod(xi, res.modulus);
    for (const auto& snap : res.snapshots) {
      const auto it = snap.apx.find(bucket);
      if (it == snap.apx.end()) continue;
      CHECK(std::abs(static_cast<double>(xi - it->second)) <=
            1.0 / (4.0 * snap.shift) + 1e-9);
    }
    // Termination identity: the final pre-update shift reached 1/2, so the
    // last snapshot pins the frequency exactly.
    REQUIRE(!res.snapshots.empty());
    CHECK(res.snapshots.back().shift >= 0.5 - 1e-12);
    const auto last = res.snapshots.back().apx.find(bucket);
    REQUIRE(last != res.snapshots.back().apx.end());
    CHECK(last->second == xi);
  }
}

TEST_CASE("noiseless 3-sparse recovery with the bracket at every round") {
  const std::int64_t F = 32;
  Rng rng(98);
  TorusSpectrum truth(F);
  std::vector<std::int64_t> freqs;
  for (std::uint64_t off : rng.distinct(3, 2 * F + 1)) {
    const std::int64_t xi = static_cast<std::int64_t>(off) - F;
    freqs.push_back(xi);
    const double theta = rng.uniform(0.0, kTwoPi);
    truth.set(xi, cplx{1.1 * std::cos(theta), 1.1 * std::sin(theta)});
  }
  NoiseParams quiet;
  quiet.seed = 99;
  TorusOracle oracle(truth, quiet);
  const auto res = torus_sfft(oracle, fast_cfg(F, 3, 100));
  REQUIRE(!res.empty_support);
  CHECK(res.support == freqs);
  for (std::int64_t xi : freqs) {
    const std::int64_t bucket = pos_mod(xi, res.modulus);
    for (const auto& snap : res.snapshots) {
      const auto it = snap.apx.find(bucket);
      if (it == snap.apx.end()) continue;
      CHECK(std::abs(static_cast<double>(xi - it->second)) <=
            1.0 / (4.0 * snap.shift) + 1e-9);
    }
  }
  for (std::int64_t xi : freqs)
    CHECK(std::abs(res.spectrum.coeff(xi) - truth.coeff(xi)) < 1e-6);
}

TEST_CASE("separation audit: batches keep at least the grid spacing") {
  TorusSpectrum truth(32);
  truth.set(7, cplx{1.0, 0.5});
  NoiseParams params;
  params.rho = 0.2;
  params.epsilon = 0.01;
  params.seed = 101;
  TorusOracle oracle(truth, params);
  const auto res = torus_sfft(oracle, fast_cfg(32, 1, 102));
  const auto stats = oracle.stats();
  REQUIRE(stats.batch_separation.has_value());
  CHECK(*stats.batch_separation >= 1.0 / (2.0 * static_cast<double>(res.modulus)));
  REQUIRE(stats.global_separation.has_value());
  CHECK(*stats.global_separation >= 0.0);
}

TEST_CASE("recovery under random outliers") {
  int good = 0;
  const int trials = 3;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(103).derived(static_cast<std::uint64_t>(t));
    const std::int64_t F = 32;
    TorusSpectrum truth(F);
    std::vector<std::int64_t> freqs;
    for (std::uint64_t off : rng.distinct(2, 2 * F + 1)) {
      const std::int64_t xi = static_cast<std::int64_t>(off) - F;
      freqs.push_back(xi);
      const double theta = rng.uniform(0.0, kTwoPi);
      truth.set(xi, cplx{1.2 * std::cos(theta), 1.2 * std::sin(theta)});
    }
    NoiseParams params;
    params.rho = 0.2;
    params.epsilon = 0.02;
    params.seed = rng.next_u64();
    TorusOracle oracle(truth, params);

    TorusSfftConfig cfg = fast_cfg(F, 2, rng.next_u64());
    cfg.inner.m_override = 32;
    cfg.inner.sigma = 4.0;
    const auto res = torus_sfft(oracle, cfg);
    good += (res.support == freqs) ? 1 : 0;
  }
  CHECK(good >= trials - 1);
}

TEST_SUITE_END();
