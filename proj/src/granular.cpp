#include "rsfft/granular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsfft/kernels.hpp"

namespace rsfft {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

std::vector<cplx> granular_amplitude_lattice(double eta) {
  if (eta <= 0.0) throw std::invalid_argument("granular lattice: eta must be > 0");
  std::vector<cplx> lattice;
  const auto qmax = static_cast<std::int64_t>(std::floor(1.0 / eta));
  for (std::int64_t qa = -qmax; qa <= qmax; ++qa) {
    for (std::int64_t qb = -qmax; qb <= qmax; ++qb) {
      if (qa == 0 && qb == 0) continue;
      const double a = eta * static_cast<double>(qa);
      const double b = eta * static_cast<double>(qb);
      if (a * a + b * b <= 1.0 + 1e-12) lattice.emplace_back(a, b);
    }
  }
  // -qmax..qmax double loop already emits ascending (re, im).
  return lattice;
}

GranularGrid::GranularGrid(std::int64_t bandlimit, int k, double eta, std::uint64_t raw_guard)
    : bandlimit_(bandlimit), k_(k), eta_(eta), lattice_(granular_amplitude_lattice(eta)) {
  if (bandlimit < 0) throw std::invalid_argument("GranularGrid: negative bandlimit");
  if (k < 1) throw std::invalid_argument("GranularGrid: k must be >= 1");
  const std::uint64_t n_freqs = static_cast<std::uint64_t>(2 * bandlimit + 1);
  if (static_cast<std::uint64_t>(k) > n_freqs)
    throw std::invalid_argument("GranularGrid: k exceeds the frequency count");

  binom_.assign(n_freqs + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(k) + 1, 0));
  for (std::uint64_t i = 0; i <= n_freqs; ++i) {
    binom_[i][0] = 1;
    for (std::uint64_t j = 1; j <= std::min<std::uint64_t>(i, static_cast<std::uint64_t>(k)); ++j)
      binom_[i][j] = binom_[i - 1][j - 1] + (i >= 1 ? binom_[i - 1][j] : 0);
  }
  combos_ = binom_[n_freqs][static_cast<std::size_t>(k)];

  amp_tuples_ = 1;
  for (int j = 0; j < k; ++j) {
    if (lattice_.empty()) {
      amp_tuples_ = 0;
      break;
    }
    const std::uint64_t next = amp_tuples_ * lattice_.size();
    if (next / lattice_.size() != amp_tuples_)
      throw std::invalid_argument("GranularGrid: enumeration-size guard exceeded");
    amp_tuples_ = next;
  }
  raw_size_ = combos_ * amp_tuples_;
  if (amp_tuples_ != 0 && raw_size_ / amp_tuples_ != combos_)
    throw std::invalid_argument("GranularGrid: enumeration-size guard exceeded");
  if (raw_size_ > raw_guard)
    throw std::invalid_argument("GranularGrid: enumeration-size guard exceeded");
}

bool GranularGrid::candidate(std::uint64_t raw_index, std::vector<std::int64_t>& freqs,
                             std::vector<cplx>& amps) const {
  const std::uint64_t combo_rank = raw_index / amp_tuples_;
  std::uint64_t amp_rank = raw_index % amp_tuples_;

  // Unrank the ascending frequency combination.
  freqs.resize(static_cast<std::size_t>(k_));
  const std::uint64_t n_freqs = static_cast<std::uint64_t>(2 * bandlimit_ + 1);
  std::uint64_t rank = combo_rank;
  std::uint64_t next_value = 0;
  for (int slot = 0; slot < k_; ++slot) {
    const int remaining = k_ - slot - 1;
    for (std::uint64_t v = next_value;; ++v) {
      // Combinations with first element v: C(n_freqs - v - 1, remaining).
      const std::uint64_t tail = n_freqs - v - 1;
      const std::uint64_t count =
          (tail >= static_cast<std::uint64_t>(remaining))
              ? binom_[tail][static_cast<std::size_t>(remaining)]
              : 0;
      if (rank < count) {
        freqs[static_cast<std::size_t>(slot)] =
            static_cast<std::int64_t>(v) - bandlimit_;
        next_value = v + 1;
        break;
      }
      rank -= count;
    }
  }

  // Mixed-radix amplitude tuple, last coefficient varying fastest.
  amps.resize(static_cast<std::size_t>(k_));
  double power = 0.0;
  for (int j = k_ - 1; j >= 0; --j) {
    const std::uint64_t digit = amp_rank % lattice_.size();
    amp_rank /= lattice_.size();
    amps[static_cast<std::size_t>(j)] = lattice_[static_cast<std::size_t>(digit)];
    power += std::norm(amps[static_cast<std::size_t>(j)]);
  }
  return power <= 1.0 + 1e-12;
}

TorusSpectrum GranularGrid::to_spectrum(const std::vector<std::int64_t>& freqs,
                                        const std::vector<cplx>& amps) const {
  TorusSpectrum s(bandlimit_);
  for (std::size_t j = 0; j < freqs.size(); ++j) s.set(freqs[j], amps[j]);
  return s;
}

std::uint64_t GranularGrid::visit(const std::function<bool(const TorusSpectrum&)>& fn) const {
  std::vector<std::int64_t> freqs;
  std::vector<cplx> amps;
  std::uint64_t visited = 0;
  for (std::uint64_t idx = 0; idx < raw_size_; ++idx) {
    if (!candidate(idx, freqs, amps)) continue;
    ++visited;
    if (!fn(to_spectrum(freqs, amps))) break;
  }
  return visited;
}

std::uint64_t GranularGrid::count() const {
  std::vector<std::int64_t> freqs;
  std::vector<cplx> amps;
  std::uint64_t qualifying = 0;
  for (std::uint64_t idx = 0; idx < raw_size_; ++idx)
    if (candidate(idx, freqs, amps)) ++qualifying;
  return qualifying;
}

long long GranularDecodeConfig::sample_count(std::int64_t bandlimit, int k, double eta) const {
  if (m_override > 0) return m_override;
  const double arg = std::max(2.0, static_cast<double>(bandlimit) / eta);
  const double m = sample_constant * static_cast<double>(k) * std::log(arg) / (delta * delta);
  return std::max<long long>(static_cast<long long>(std::ceil(m)), 16);
}

GranularDecodeResult granular_decode(const TorusOracle& oracle, const GranularGrid& grid,
                                     const GranularDecodeConfig& cfg) {
  GranularDecodeResult res;
  res.m = cfg.sample_count(grid.bandlimit(), grid.k(), grid.eta());

  Rng rng = Rng(cfg.seed).derived(0x62a17);
  auto stream = oracle.stream(0x62a17);
  std::vector<double> points(static_cast<std::size_t>(res.m));
  std::vector<cplx> obs(static_cast<std::size_t>(res.m));
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i] = rng.uniform01();
    obs[i] = stream.query(points[i]);
  }
  res.sample_points = points;
  oracle.register_batch(points);

  const double threshold = (0.5 - cfg.delta / 2.0) * static_cast<double>(res.m);
  const std::uint64_t raw = grid.raw_size();
  const std::uint64_t chunk = 2048;

  // Deterministic first acceptance: scan fixed-size chunks in order, test the
  // chunk's candidates in parallel, and stop at the lowest accepted index.
  std::uint64_t found = raw;
  for (std::uint64_t base = 0; base < raw && found == raw; base += chunk) {
    const std::uint64_t end = std::min(raw, base + chunk);
    std::uint64_t local_best = raw;
#pragma omp parallel
    {
      std::vector<std::int64_t> freqs;
      std::vector<cplx> amps;
      std::uint64_t mine = raw;
#pragma omp for schedule(static) nowait
      for (std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(base);
           idx < static_cast<std::ptrdiff_t>(end); ++idx) {
        const auto raw_idx = static_cast<std::uint64_t>(idx);
        if (raw_idx >= mine) continue;
        if (!grid.candidate(raw_idx, freqs, amps)) continue;
        long long bad = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
          cplx g{0.0, 0.0};
          for (std::size_t j = 0; j < freqs.size(); ++j) {
            const double ang = kTwoPi * static_cast<double>(freqs[j]) * points[i];
            g += amps[j] * cplx{std::cos(ang), std::sin(ang)};
          }
          if (std::abs(g - obs[i]) >= cfg.epsilon) ++bad;
          if (static_cast<double>(bad) >= threshold) break;
        }
        if (static_cast<double>(bad) < threshold && raw_idx < mine) mine = raw_idx;
      }
#pragma omp critical
      local_best = std::min(local_best, mine);
    }
    found = local_best;
  }

  if (found == raw) return res;  // diagnostic failure: noise outside the model
  std::vector<std::int64_t> freqs;
  std::vector<cplx> amps;
  grid.candidate(found, freqs, amps);
  res.spectrum = grid.to_spectrum(freqs, amps);
  res.accepted = true;
  res.candidate_index = found;
  return res;
}

double anticoncentration_probe(const TorusSpectrum& spec, double tau, std::size_t grid_size) {
  if (grid_size < 1000) throw std::invalid_argument("anticoncentration_probe: grid too small");
  std::vector<long long> freqs;
  std::vector<cplx> coeffs;
  for (const auto& [xi, c] : spec.entries()) {
    freqs.push_back(xi);
    coeffs.push_back(c);
  }
  const std::size_t below = grid_count_below_parallel(freqs, coeffs, tau, grid_size);
  return static_cast<double>(below) / static_cast<double>(grid_size);
}

JensenReport jensen_check(const TorusSpectrum& spec, std::size_t nodes) {
  if (spec.entries().empty()) throw std::invalid_argument("jensen_check: empty spectrum");
  if (nodes < 8) throw std::invalid_argument("jensen_check: too few nodes");
  const auto first = spec.entries().begin();
  const std::int64_t xi1 = first->first;
  const cplx v1 = first->second;
  if (std::abs(v1) == 0.0)
    throw std::invalid_argument("jensen_check: lowest-frequency coefficient is zero");

  JensenReport rep;
  rep.lhs = std::log(std::abs(v1));  // P(0) = v1 by construction
  double acc = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(nodes);
    cplx p{0.0, 0.0};
    for (const auto& [xi, c] : spec.entries()) {
      const double ang = theta * static_cast<double>(xi - xi1);
      p += c * cplx{std::cos(ang), std::sin(ang)};
    }
    acc += std::log(std::abs(p));
  }
  rep.rhs = acc / static_cast<double>(nodes);
  rep.slack = rep.rhs - rep.lhs;
  return rep;
}

TorusSpectrum counterexample_signal(int k) {
  if (k < 1 || k > 60) throw std::invalid_argument("counterexample_signal: k out of [1, 60]");
  std::vector<double> binom(static_cast<std::size_t>(k) + 1);
  binom[0] = 1.0;
  for (int j = 1; j <= k; ++j)
    binom[static_cast<std::size_t>(j)] =
        binom[static_cast<std::size_t>(j - 1)] * static_cast<double>(k - j + 1) /
        static_cast<double>(j);
  double power = 0.0;
  for (double c : binom) power += c * c;
  const double scale = 1.0 / std::sqrt(power);
  TorusSpectrum s(k);
  for (int j = 0; j <= k; ++j)
    s.set(j, cplx{binom[static_cast<std::size_t>(j)] * scale, 0.0});
  return s;
}

}  // namespace rsfft
