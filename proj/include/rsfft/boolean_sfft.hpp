#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rsfft/decode.hpp"
#include "rsfft/f2.hpp"
#include "rsfft/noise.hpp"
#include "rsfft/spectrum.hpp"

namespace rsfft {

struct BooleanSfftConfig {
  int k = 1;
  double delta = 0.2;  // rho = 1/2 - delta
  double eta = 1.0;
  int ell_override = 0;  // 0 -> 2*ceil(log2 k) + 10, capped at n
  DecodeConfig inner;    // per-bucket decoder; gamma set to 1e-3/(k n) unless fixed
  bool inner_gamma_auto = true;
  double refit_constant = 8.0;  // m_refit = refit_constant * k^2 * n / delta^2
  long long refit_m_override = 0;
  std::uint64_t seed = 0;

  int ell_for(int n, int k_eff) const;
  long long refit_count(int n) const;
};

// Per-bucket bit accumulator: '*' = unseen, 0/1 decided, null = dropped for
// good once the bucket misses either recovered support.
struct ListEntry {
  bool null = false;
  std::vector<std::uint8_t> bits;  // 0, 1, or 2 for '*'
  static constexpr std::uint8_t kStar = 2;

  bool finalized() const;
  std::uint64_t to_bits() const;
};

struct BooleanSfftResult {
  BooleanSpectrum spectrum;
  bool empty_list = false;  // no bucket survived; zero spectrum returned
  F2Matrix hash_matrix;
  int ell = 0;
  long long inner_m = 0;
  long long refit_m = 0;
  std::map<std::uint64_t, ListEntry> list;  // surviving buckets after the loop
  std::vector<FreqVec> finalized;           // deduped recovered frequencies
};

// True iff no other frequency shares the truncated hash (A^T xi)_[ell].
std::vector<bool> check_isolation(const F2Matrix& a, const std::vector<FreqVec>& freqs,
                                  int ell);

// Reduced-domain view of the oracle: u in {0,1}^ell maps to the query
// A (u || 0^(n-ell)) + b. The subspace-filter scale is a uniform factor on
// every bucket coefficient and is dropped; sign comparisons are unaffected.
BooleanQueryFn filtered_bucket_oracle(BooleanOracleStream stream, const F2Matrix& a,
                                      const FreqVec& b, int ell);

BooleanSfftResult boolean_sfft(const BooleanOracle& oracle, const BooleanSfftConfig& cfg);

}  // namespace rsfft
