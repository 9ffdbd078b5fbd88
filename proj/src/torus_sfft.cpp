#include "rsfft/torus_sfft.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rsfft {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

bool is_prime(std::int64_t v) {
  if (v < 2) return false;
  if (v < 4) return true;
  if (v % 2 == 0) return false;
  for (std::int64_t d = 3; d * d <= v; d += 2)
    if (v % d == 0) return false;
  return true;
}

}  // namespace

double TorusSfftConfig::desk_floor() const {
  const double f = static_cast<double>(bandlimit);
  return std::max(2.0 * k * std::log2(2.0 * f), 4.0 * static_cast<double>(k) * k);
}

long long TorusSfftConfig::refit_count() const {
  if (refit_m_override > 0) return refit_m_override;
  const double m = refit_constant * static_cast<double>(k) * k / (delta * delta);
  return std::max<long long>(static_cast<long long>(std::ceil(m)), 2 * k);
}

std::vector<std::int64_t> prime_pool_above(double floor, int pool) {
  if (pool < 1) throw std::invalid_argument("prime_pool_above: empty pool requested");
  if (!(floor < 1e12))
    throw std::invalid_argument("prime_pool_above: floor too large to sieve (pool empty)");
  std::vector<std::int64_t> primes;
  primes.reserve(static_cast<std::size_t>(pool));
  std::int64_t v = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::floor(floor)) + 1);
  while (static_cast<int>(primes.size()) < pool) {
    if (is_prime(v)) primes.push_back(v);
    ++v;
  }
  return primes;
}

std::int64_t pick_prime(double floor, int pool, Rng& rng) {
  const auto primes = prime_pool_above(floor, pool);
  return primes[rng.below(primes.size())];
}

FrequencyHashPair frequency_hash(TorusOracleStream base, TorusOracleStream shifted,
                                 std::int64_t modulus, double shift, double t0) {
  if (modulus < 2) throw std::invalid_argument("frequency_hash: modulus must be >= 2");
  FrequencyHashPair pair;
  pair.t0 = t0;
  const double inv_b = 1.0 / static_cast<double>(modulus);
  pair.z = [base, t0, inv_b](std::int64_t x) mutable {
    return base.query(t0 + static_cast<double>(x) * inv_b);
  };
  pair.z_shift = [shifted, t0, shift, inv_b](std::int64_t x) mutable {
    return shifted.query(t0 + shift + static_cast<double>(x) * inv_b);
  };
  return pair;
}

std::optional<std::int64_t> phase_update(std::int64_t apx, cplx c, cplx c_shift,
                                         double shift) {
  if (c == cplx{0.0, 0.0}) return std::nullopt;
  const double twist = -kTwoPi * shift * static_cast<double>(apx);
  const cplx rot{std::cos(twist), std::sin(twist)};
  double gamma = std::arg(rot * c_shift / c);
  if (gamma >= kPi) gamma = std::nextafter(kPi, 0.0);  // principal value in [-pi, pi)
  const double step = gamma / (kTwoPi * shift);
  return apx + static_cast<std::int64_t>(std::llround(step));
}

TorusSfftResult torus_sfft(const TorusOracle& oracle, const TorusSfftConfig& cfg) {
  if (cfg.bandlimit < 1) throw std::invalid_argument("torus_sfft: bandlimit must be >= 1");
  TorusSfftResult res;

  Rng master(cfg.seed);
  Rng prime_rng = master.derived(1);
  const double floor = cfg.prime_floor > 0.0 ? cfg.prime_floor : cfg.desk_floor();
  const std::int64_t b = pick_prime(floor, cfg.prime_pool, prime_rng);
  res.modulus = b;

  const double f = static_cast<double>(cfg.bandlimit);
  const int rounds = static_cast<int>(std::ceil(std::log2(2.0 * f))) + 1;
  res.rounds = rounds;

  DecodeConfig inner = cfg.inner;
  inner.k = cfg.k;
  inner.delta = cfg.delta;
  inner.eta = cfg.eta;
  if (cfg.inner_gamma_auto)
    inner.gamma = 1e-3 / (static_cast<double>(cfg.k) * std::log2(2.0 * f));

  // Apx starts at zero for every residue; buckets die when they miss either
  // recovered support and never come back.
  std::map<std::int64_t, std::int64_t> apx;
  for (std::int64_t xi = 0; xi < b; ++xi) apx.emplace(xi, 0);

  double shift = 1.0 / (4.0 * f);
  for (int round = 0; round < rounds; ++round) {
    Rng round_rng = master.derived(2, static_cast<std::uint64_t>(round));
    const double t0 = round_rng.uniform01() / static_cast<double>(b);
    auto pair = frequency_hash(oracle.stream(2 * static_cast<std::uint64_t>(round)),
                               oracle.stream(2 * static_cast<std::uint64_t>(round) + 1), b,
                               shift, t0);

    const auto dec_z = linear_decode_cyclic(pair.z, b, inner, round_rng.derived(10));
    const auto dec_zp = linear_decode_cyclic(pair.z_shift, b, inner, round_rng.derived(11));
    res.inner_m += dec_z.m + dec_zp.m;

    // Separation audit: each decode's actual query times form one batch.
    std::vector<double> times_z, times_zp;
    times_z.reserve(dec_z.samples.size());
    for (std::int64_t x : dec_z.samples)
      times_z.push_back(t0 + static_cast<double>(x) / static_cast<double>(b));
    for (std::int64_t x : dec_zp.samples)
      times_zp.push_back(t0 + shift + static_cast<double>(x) / static_cast<double>(b));
    oracle.register_batch(times_z);
    oracle.register_batch(times_zp);

    const bool round_failed = dec_z.decode_failed || dec_zp.decode_failed;
    for (auto it = apx.begin(); it != apx.end();) {
      const cplx cz = round_failed ? cplx{0.0, 0.0} : dec_z.spectrum.coeff(it->first);
      const cplx czp = round_failed ? cplx{0.0, 0.0} : dec_zp.spectrum.coeff(it->first);
      if (cz == cplx{0.0, 0.0} || czp == cplx{0.0, 0.0}) {
        it = apx.erase(it);
        continue;
      }
      const auto updated = phase_update(it->second, cz, czp, shift);
      if (!updated) {
        it = apx.erase(it);
        continue;
      }
      it->second = *updated;
      ++it;
    }

    TorusRoundSnapshot snap;
    snap.round = round;
    snap.shift = shift;
    snap.apx = apx;
    res.snapshots.push_back(std::move(snap));

    shift *= 2.0;
  }

  // Surviving estimates inside the bandlimit, deduped, are the support.
  std::set<std::int64_t> support;
  for (const auto& [bucket, estimate] : apx) {
    if (estimate >= -cfg.bandlimit && estimate <= cfg.bandlimit) support.insert(estimate);
  }
  res.support.assign(support.begin(), support.end());

  res.spectrum = TorusSpectrum(cfg.bandlimit);
  if (res.support.empty()) {
    res.empty_support = true;
    return res;
  }

  // Fresh refit on a randomly offset equispaced grid: each point is uniform
  // on the torus, and the batch keeps spacing 1/m so the separation audit is
  // meaningful at desk scale (iid points would collide at the 1/m^2 scale).
  res.refit_m = cfg.refit_count();
  Rng refit_rng = master.derived(5);
  auto refit_stream = oracle.stream(0xfe11ULL);
  const double offset = refit_rng.uniform01();
  std::vector<double> points;
  std::vector<cplx> obs;
  points.reserve(static_cast<std::size_t>(res.refit_m));
  for (long long t = 0; t < res.refit_m; ++t) {
    double x = offset + static_cast<double>(t) / static_cast<double>(res.refit_m);
    x -= std::floor(x);
    points.push_back(x);
    obs.push_back(refit_stream.query(x));
  }
  oracle.register_batch(points);

  std::vector<std::vector<cplx>> design(points.size(), std::vector<cplx>(res.support.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < res.support.size(); ++j) {
      const double ang = kTwoPi * static_cast<double>(res.support[j]) * points[i];
      design[i][j] = cplx{std::cos(ang), std::sin(ang)};
    }
  }
  const auto fit = l1_regression(design, obs, cfg.inner.fit);
  if (fit.status == LpStatus::kOptimal) {
    for (std::size_t j = 0; j < res.support.size(); ++j)
      res.spectrum.set(res.support[j], fit.coeffs[j]);
  } else {
    res.empty_support = true;
  }
  return res;
}

}  // namespace rsfft
