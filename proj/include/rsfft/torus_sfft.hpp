#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rsfft/decode.hpp"
#include "rsfft/noise.hpp"
#include "rsfft/spectrum.hpp"

namespace rsfft {

struct TorusSfftConfig {
  std::int64_t bandlimit = 64;
  int k = 1;
  double delta = 0.25;  // rho = 1/2 - delta
  double eta = 1.0;
  // Bucketing prime: uniform from the first `prime_pool` primes above the
  // floor. Floor <= 0 selects the desk default max(2k log2(2F), 4k^2); the
  // literature floor (k log F / delta)^10 is available for documentation but
  // is far beyond what a desk machine can bucket.
  double prime_floor = 0.0;
  int prime_pool = 1000;
  DecodeConfig inner;  // per-round decoder; gamma set to 1e-3/(k log2(2F)) unless fixed
  bool inner_gamma_auto = true;
  double refit_constant = 8.0;  // m_refit = refit_constant * k^2 / delta^2
  long long refit_m_override = 0;
  std::uint64_t seed = 0;

  double desk_floor() const;
  long long refit_count() const;
};

// First `pool` primes strictly above `floor`, then a uniform pick.
std::vector<std::int64_t> prime_pool_above(double floor, int pool);
std::int64_t pick_prime(double floor, int pool, Rng& rng);

// Paired sample grids for one doubling round: z[x] = y(t0 + x/B) and
// z'[x] = y(t0 + shift + x/B).
struct FrequencyHashPair {
  CyclicQueryFn z;
  CyclicQueryFn z_shift;
  double t0 = 0.0;
};
FrequencyHashPair frequency_hash(TorusOracleStream base, TorusOracleStream shifted,
                                 std::int64_t modulus, double shift, double t0);

// One phase-doubling update: gamma = Phase(e^{-2 pi i shift apx} c'/c) in
// [-pi, pi), apx += round(gamma / (2 pi shift)). nullopt when c == 0.
std::optional<std::int64_t> phase_update(std::int64_t apx, cplx c, cplx c_shift,
                                         double shift);

struct TorusRoundSnapshot {
  int round = 0;
  double shift = 0.0;                      // the pre-update phase step
  std::map<std::int64_t, std::int64_t> apx;  // surviving buckets after the round
};

struct TorusSfftResult {
  TorusSpectrum spectrum;
  bool empty_support = false;
  std::int64_t modulus = 0;
  int rounds = 0;
  long long inner_m = 0;
  long long refit_m = 0;
  std::vector<std::int64_t> support;  // recovered frequencies before refit
  std::vector<TorusRoundSnapshot> snapshots;
};

TorusSfftResult torus_sfft(const TorusOracle& oracle, const TorusSfftConfig& cfg);

}  // namespace rsfft
