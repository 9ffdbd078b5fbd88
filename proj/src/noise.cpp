#include "rsfft/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsfft {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kTorusResolution = 0x1.0p40;  // adversarial predicate grid

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double hash01(std::uint64_t seed, std::uint64_t tag, std::uint64_t point) {
  const std::uint64_t h = mix64(mix64(seed ^ 0x6f1d0f7a2c55ull) ^ mix64(tag) ^ point * 0x9e3779b97f4a7c15ull);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::uint64_t torus_cell(double t) {
  double frac = t - std::floor(t);
  return static_cast<std::uint64_t>(frac * kTorusResolution);
}

}  // namespace

InlierStrategy inlier_strategy_from_name(const std::string& name) {
  if (name == "uniform") return InlierStrategy::kUniform;
  if (name == "worst-sign") return InlierStrategy::kWorstSign;
  throw std::invalid_argument("unknown inlier strategy: " + name);
}

OutlierStrategy outlier_strategy_from_name(const std::string& name) {
  if (name == "large-constant") return OutlierStrategy::kLargeConstant;
  if (name == "zero") return OutlierStrategy::kZero;
  if (name == "decoy") return OutlierStrategy::kDecoy;
  throw std::invalid_argument("unknown outlier strategy: " + name);
}

std::vector<std::string> outlier_strategy_names() {
  return {"large-constant", "zero", "decoy"};
}

void NoiseParams::validate() const {
  if (rho < 0.0 || rho >= 1.0) throw std::invalid_argument("NoiseParams: rho must be in [0,1)");
  if (epsilon < 0.0) throw std::invalid_argument("NoiseParams: epsilon must be >= 0");
}

// ---------------------------------------------------------------------------
// BooleanOracle

BooleanOracle::BooleanOracle(BooleanSpectrum truth, NoiseParams params)
    : BooleanOracle(std::move(truth), params, BooleanSpectrum{}) {}

BooleanOracle::BooleanOracle(BooleanSpectrum truth, NoiseParams params, BooleanSpectrum decoy)
    : truth_(std::move(truth)),
      decoy_(std::move(decoy)),
      params_(params),
      stats_(std::make_shared<detail::StatsBlock>()),
      default_stream_(this, Rng(params.seed).derived(0x0badc0ffee)) {
  params_.validate();
  truth_norm1_ = truth_.norm1();
  if (params_.model == NoiseModel::kAdversarial && truth_.n() <= 22) {
    // Exact-count corruption mark: exactly floor(rho * 2^n) domain points.
    const std::uint64_t size = std::uint64_t{1} << truth_.n();
    const auto count = static_cast<std::uint64_t>(params_.rho * static_cast<double>(size));
    marked_.assign(size, false);
    Rng mark_rng = Rng(params_.seed).derived(0xadf00d);
    for (std::uint64_t p : mark_rng.distinct(count, size)) marked_[p] = true;
  }
}

BooleanOracleStream BooleanOracle::stream(std::uint64_t id) const {
  return BooleanOracleStream(this, Rng(params_.seed).derived(0x5712ea3, id));
}

double BooleanOracle::truth_value(const FreqVec& x) const { return boolean_eval(truth_, x); }

bool BooleanOracle::sticky_outlier(const FreqVec& x) const {
  if (!marked_.empty()) return marked_[x.bits];
  return hash01(params_.seed, 0x10c, x.bits) < params_.rho;
}

double BooleanOracle::inlier_value(const FreqVec& x, double fx, Rng& rng) const {
  if (params_.epsilon == 0.0) return fx;
  switch (params_.inlier) {
    case InlierStrategy::kWorstSign:
      return fx - params_.epsilon * (fx >= 0.0 ? 1.0 : -1.0);
    case InlierStrategy::kUniform:
    default:
      if (params_.model == NoiseModel::kRandom)
        return fx + rng.uniform(-params_.epsilon, params_.epsilon);
      // Fixed-per-point error keeps sticky/adversarial responses consistent.
      return fx + params_.epsilon * (2.0 * hash01(params_.seed, 0x1e4, x.bits) - 1.0);
  }
}

double BooleanOracle::outlier_value(const FreqVec& x) const {
  switch (params_.outlier) {
    case OutlierStrategy::kZero:
      return 0.0;
    case OutlierStrategy::kDecoy:
      return boolean_eval(decoy_, x);
    case OutlierStrategy::kLargeConstant:
    default:
      return 10.0 * truth_norm1_;
  }
}

double BooleanOracle::respond(const FreqVec& x, Rng& rng) const {
  if (x.n != truth_.n()) throw std::invalid_argument("oracle query: point length mismatch");
  bool outlier;
  if (params_.model == NoiseModel::kRandom)
    outlier = rng.coin(params_.rho);
  else
    outlier = sticky_outlier(x);
  const double value = outlier ? outlier_value(x) : inlier_value(x, truth_value(x), rng);
  {
    std::lock_guard<std::mutex> lock(stats_->mu);
    ++stats_->queries;
    if (outlier) ++stats_->outliers;
  }
  return value;
}

OracleStats BooleanOracle::stats() const {
  std::lock_guard<std::mutex> lock(stats_->mu);
  OracleStats s;
  s.query_count = stats_->queries;
  s.outlier_count = stats_->outliers;
  return s;
}

double BooleanOracleStream::query(const FreqVec& x) { return oracle_->respond(x, rng_); }

// ---------------------------------------------------------------------------
// TorusOracle

TorusOracle::TorusOracle(TorusSpectrum truth, NoiseParams params)
    : TorusOracle(std::move(truth), params, TorusSpectrum{}) {}

TorusOracle::TorusOracle(TorusSpectrum truth, NoiseParams params, TorusSpectrum decoy)
    : truth_(std::move(truth)),
      decoy_(std::move(decoy)),
      params_(params),
      stats_(std::make_shared<detail::StatsBlock>()),
      default_stream_(this, Rng(params.seed).derived(0x0badc0ffee)) {
  params_.validate();
  truth_norm1_ = truth_.norm1();
  stats_->track_times = true;
}

TorusOracleStream TorusOracle::stream(std::uint64_t id) const {
  return TorusOracleStream(this, Rng(params_.seed).derived(0x5712ea3, id));
}

bool TorusOracle::sticky_outlier(double t) const {
  return hash01(params_.seed, 0x10c, torus_cell(t)) < params_.rho;
}

cplx TorusOracle::inlier_value(double t, cplx ft, Rng& rng) const {
  if (params_.epsilon == 0.0) return ft;
  switch (params_.inlier) {
    case InlierStrategy::kWorstSign: {
      const double mag = std::abs(ft);
      if (mag == 0.0) return ft - cplx{params_.epsilon, 0.0};
      return ft - params_.epsilon * ft / mag;
    }
    case InlierStrategy::kUniform:
    default: {
      double r, theta;
      if (params_.model == NoiseModel::kRandom) {
        r = params_.epsilon * rng.uniform01();
        theta = kTwoPi * rng.uniform01();
      } else {
        r = params_.epsilon * hash01(params_.seed, 0x1e4, torus_cell(t));
        theta = kTwoPi * hash01(params_.seed, 0x7e7a, torus_cell(t));
      }
      return ft + cplx{r * std::cos(theta), r * std::sin(theta)};
    }
  }
}

cplx TorusOracle::outlier_value(double t) const {
  switch (params_.outlier) {
    case OutlierStrategy::kZero:
      return {0.0, 0.0};
    case OutlierStrategy::kDecoy:
      return torus_eval(decoy_, t);
    case OutlierStrategy::kLargeConstant:
    default:
      return {10.0 * truth_norm1_, 0.0};
  }
}

cplx TorusOracle::respond(double t, Rng& rng) const {
  bool outlier;
  if (params_.model == NoiseModel::kRandom)
    outlier = rng.coin(params_.rho);
  else
    outlier = sticky_outlier(t);
  const cplx value = outlier ? outlier_value(t) : inlier_value(t, torus_eval(truth_, t), rng);
  {
    std::lock_guard<std::mutex> lock(stats_->mu);
    ++stats_->queries;
    if (outlier) ++stats_->outliers;
    if (stats_->track_times) stats_->times.push_back(t - std::floor(t));
  }
  return value;
}

void TorusOracle::register_batch(const std::vector<double>& times) const {
  if (times.size() < 2) return;
  std::vector<double> sorted(times);
  for (double& t : sorted) t -= std::floor(t);
  std::sort(sorted.begin(), sorted.end());
  double best = 1.0;
  for (std::size_t i = 1; i < sorted.size(); ++i) best = std::min(best, sorted[i] - sorted[i - 1]);
  best = std::min(best, sorted.front() + 1.0 - sorted.back());  // circular wrap
  std::lock_guard<std::mutex> lock(stats_->mu);
  if (stats_->batch_sep_min < 0.0 || best < stats_->batch_sep_min) stats_->batch_sep_min = best;
}

OracleStats TorusOracle::stats() const {
  std::lock_guard<std::mutex> lock(stats_->mu);
  OracleStats s;
  s.query_count = stats_->queries;
  s.outlier_count = stats_->outliers;
  if (stats_->batch_sep_min >= 0.0) s.batch_separation = stats_->batch_sep_min;
  if (stats_->times.size() >= 2) {
    std::vector<double> sorted(stats_->times);
    std::sort(sorted.begin(), sorted.end());
    double best = 1.0;
    for (std::size_t i = 1; i < sorted.size(); ++i)
      best = std::min(best, sorted[i] - sorted[i - 1]);
    best = std::min(best, sorted.front() + 1.0 - sorted.back());
    s.global_separation = best;
  }
  return s;
}

cplx TorusOracleStream::query(double t) { return oracle_->respond(t, rng_); }

}  // namespace rsfft
