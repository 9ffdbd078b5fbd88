#include "rsfft/boolean_sfft.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rsfft {

int BooleanSfftConfig::ell_for(int n, int k_eff) const {
  int ell = ell_override;
  if (ell <= 0) {
    const int log2k = static_cast<int>(std::ceil(std::log2(std::max(2, k_eff))));
    ell = 2 * log2k + 10;
  }
  ell = std::min(ell, n);
  const int floor_ell = static_cast<int>(std::floor(std::log2(std::max(1, k_eff)))) + 1;
  if (ell < std::min(floor_ell, n))
    throw std::invalid_argument("boolean_sfft: ell below log2(k)+1");
  return ell;
}

long long BooleanSfftConfig::refit_count(int n) const {
  if (refit_m_override > 0) return refit_m_override;
  const double m = refit_constant * static_cast<double>(k) * k * n / (delta * delta);
  return std::max<long long>(static_cast<long long>(std::ceil(m)), 2 * k);
}

bool ListEntry::finalized() const {
  if (null) return false;
  for (std::uint8_t b : bits)
    if (b == kStar) return false;
  return true;
}

std::uint64_t ListEntry::to_bits() const {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] == 1) v |= std::uint64_t{1} << i;
  return v;
}

std::vector<bool> check_isolation(const F2Matrix& a, const std::vector<FreqVec>& freqs,
                                  int ell) {
  const F2Matrix at = a.transpose();
  const std::uint64_t mask = (ell >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << ell) - 1);
  std::vector<std::uint64_t> buckets;
  buckets.reserve(freqs.size());
  for (const auto& xi : freqs) buckets.push_back(at.apply(xi).bits & mask);
  std::vector<bool> isolated(freqs.size(), true);
  for (std::size_t i = 0; i < buckets.size(); ++i)
    for (std::size_t j = 0; j < buckets.size(); ++j)
      if (i != j && buckets[i] == buckets[j]) isolated[i] = false;
  return isolated;
}

BooleanQueryFn filtered_bucket_oracle(BooleanOracleStream stream, const F2Matrix& a,
                                      const FreqVec& b, int ell) {
  const int n = a.rows();
  if (ell < 1 || ell > n) throw std::invalid_argument("filtered_bucket_oracle: bad ell");
  return [stream, a, b, n](const FreqVec& u) mutable {
    const FreqVec lifted(u.bits, n);  // zero-padded to the ambient dimension
    return stream.query(add_f2(a.apply(lifted), b));
  };
}

BooleanSfftResult boolean_sfft(const BooleanOracle& oracle, const BooleanSfftConfig& cfg) {
  const int n = oracle.n();
  if (n < 1) throw std::invalid_argument("boolean_sfft: empty domain");
  BooleanSfftResult res;
  res.ell = cfg.ell_for(n, cfg.k);
  const int ell = res.ell;

  Rng master(cfg.seed);
  Rng a_rng = master.derived(1);
  const auto a_opt = random_invertible_f2(n, a_rng);
  if (!a_opt) throw std::runtime_error("boolean_sfft: invertible-matrix sampling failed");
  const F2Matrix a = *a_opt;
  res.hash_matrix = a;

  DecodeConfig inner = cfg.inner;
  inner.k = cfg.k;
  inner.delta = cfg.delta;
  inner.eta = cfg.eta;
  if (cfg.inner_gamma_auto) inner.gamma = 1e-3 / (static_cast<double>(cfg.k) * n);

  std::vector<std::uint64_t> all_chars(std::size_t{1} << ell);
  for (std::size_t j = 0; j < all_chars.size(); ++j) all_chars[j] = j;

  const std::uint64_t n_mask = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);

  // Per-coordinate sign comparisons; iterations are independent given A, so
  // they run in parallel with per-coordinate streams.
  struct CoordOutcome {
    std::vector<std::uint64_t> both;  // buckets present in both supports
    std::vector<std::uint8_t> bit;    // decoded bit for those buckets
    long long m = 0;
  };
  std::vector<CoordOutcome> coords(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    Rng coord_rng = master.derived(2, static_cast<std::uint64_t>(i));
    const FreqVec b(coord_rng.next_u64() & n_mask, n);
    const FreqVec b_shift = add_f2(b, unit_vec(i, n));

    auto z = filtered_bucket_oracle(oracle.stream(2 * static_cast<std::uint64_t>(i)), a, b, ell);
    auto zp = filtered_bucket_oracle(oracle.stream(2 * static_cast<std::uint64_t>(i) + 1), a,
                                     b_shift, ell);

    const auto dec_z = linear_decode_boolean(z, ell, all_chars, inner, coord_rng.derived(10));
    const auto dec_zp = linear_decode_boolean(zp, ell, all_chars, inner, coord_rng.derived(11));

    CoordOutcome out;
    out.m = dec_z.m + dec_zp.m;
    if (!dec_z.decode_failed && !dec_zp.decode_failed) {
      for (const auto& [bucket, cz] : dec_z.spectrum.entries()) {
        const double czp = dec_zp.spectrum.coeff(bucket);
        if (czp == 0.0) continue;
        out.both.push_back(bucket);
        out.bit.push_back((cz >= 0.0) != (czp >= 0.0) ? 1 : 0);
      }
    }
    coords[static_cast<std::size_t>(i)] = std::move(out);
  }

  for (const auto& c : coords) res.inner_m += c.m;

  // Every bucket starts alive with undecided bits; a miss in any coordinate
  // round nulls it for good.
  std::map<std::uint64_t, ListEntry> alive;
  const std::uint64_t bucket_count = std::uint64_t{1} << ell;
  const bool lazy = ell > 22;
  if (!lazy) {
    for (std::uint64_t xi = 0; xi < bucket_count; ++xi)
      alive.emplace(xi, ListEntry{false, std::vector<std::uint8_t>(
                                             static_cast<std::size_t>(n), ListEntry::kStar)});
  } else {
    // Huge bucket spaces: only buckets seen in round 0 can survive anyway.
    for (std::size_t t = 0; t < coords[0].both.size(); ++t)
      alive.emplace(coords[0].both[t],
                    ListEntry{false, std::vector<std::uint8_t>(static_cast<std::size_t>(n),
                                                               ListEntry::kStar)});
  }
  for (int i = 0; i < n; ++i) {
    // `both` is ascending (it was filled from an ordered map).
    const auto& c = coords[static_cast<std::size_t>(i)];
    for (auto it = alive.begin(); it != alive.end();) {
      const auto pos = std::lower_bound(c.both.begin(), c.both.end(), it->first);
      const bool present = pos != c.both.end() && *pos == it->first;
      if (!present) {
        it = alive.erase(it);
      } else {
        it->second.bits[static_cast<std::size_t>(i)] =
            c.bit[static_cast<std::size_t>(pos - c.both.begin())];
        ++it;
      }
    }
  }

  res.list = alive;
  std::set<std::uint64_t> dedup;
  for (const auto& [bucket, entry] : alive) {
    if (!entry.finalized()) continue;
    dedup.insert(entry.to_bits());
  }
  for (std::uint64_t bits : dedup) res.finalized.emplace_back(bits, n);

  res.spectrum = BooleanSpectrum(n);
  if (res.finalized.empty()) {
    res.empty_list = true;
    return res;
  }

  // Refit on fresh samples over the full cube.
  res.refit_m = cfg.refit_count(n);
  Rng refit_rng = master.derived(5);
  auto refit_stream = oracle.stream(0xfe11ULL);
  std::vector<std::uint64_t> points;
  std::vector<double> obs;
  points.reserve(static_cast<std::size_t>(res.refit_m));
  for (long long t = 0; t < res.refit_m; ++t) {
    const std::uint64_t x = refit_rng.next_u64() & n_mask;
    points.push_back(x);
    obs.push_back(refit_stream.query(FreqVec(x, n)));
  }
  std::vector<std::uint64_t> chars;
  chars.reserve(res.finalized.size());
  for (const auto& f : res.finalized) chars.push_back(f.bits);
  const auto design = boolean_design(chars, points);
  const auto fit = l1_regression(design, obs, cfg.inner.fit);
  if (fit.status == LpStatus::kOptimal) {
    for (std::size_t j = 0; j < chars.size(); ++j) res.spectrum.set(chars[j], fit.coeffs[j]);
  } else {
    res.empty_list = true;  // refit failure degrades to the zero spectrum
  }
  return res;
}

}  // namespace rsfft
