#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rsfft/rng.hpp"
#include "rsfft/spectrum.hpp"

namespace rsfft {

// Outlier placement:
//  - kRandom: each query is an outlier independently with probability rho,
//    so re-querying a point re-randomizes its status.
//  - kRandomSticky: outlier status is a fixed seeded predicate per point,
//    marking a rho fraction of the domain at random.
//  - kAdversarial: same fixed per-point predicate semantics; the fraction of
//    corrupted domain points is capped at rho (exact count on finite domains,
//    hashed at resolution 2^-40 on the torus).
enum class NoiseModel { kRandom, kRandomSticky, kAdversarial };

// Inlier error e(x) with |e(x)| <= epsilon.
enum class InlierStrategy { kUniform, kWorstSign };

// Outlier responses.
enum class OutlierStrategy { kLargeConstant, kZero, kDecoy };

InlierStrategy inlier_strategy_from_name(const std::string& name);
OutlierStrategy outlier_strategy_from_name(const std::string& name);
std::vector<std::string> outlier_strategy_names();

struct NoiseParams {
  double rho = 0.0;
  double epsilon = 0.0;
  NoiseModel model = NoiseModel::kRandom;
  InlierStrategy inlier = InlierStrategy::kUniform;
  OutlierStrategy outlier = OutlierStrategy::kLargeConstant;
  std::uint64_t seed = 0;

  void validate() const;
};

// Shared, internally synchronized query log. The separation audit applies to
// torus oracles: each decode registers its own query batch, and `separation`
// reports the smallest pairwise circular distance seen within any one batch.
// `global_separation` is the same minimum over all logged queries of the run,
// kept as a diagnostic.
struct OracleStats {
  std::uint64_t query_count = 0;
  std::uint64_t outlier_count = 0;
  std::optional<double> batch_separation;
  std::optional<double> global_separation;
};

namespace detail {
struct StatsBlock {
  mutable std::mutex mu;
  std::uint64_t queries = 0;
  std::uint64_t outliers = 0;
  double batch_sep_min = -1.0;
  bool track_times = false;
  std::vector<double> times;
};
}  // namespace detail

class BooleanOracle;
class TorusOracle;

// Sequential view of an oracle; queries within one stream consume a private
// deterministic draw sequence, so concurrent streams cannot perturb each
// other's responses.
class BooleanOracleStream {
 public:
  double query(const FreqVec& x);

 private:
  friend class BooleanOracle;
  BooleanOracleStream(const BooleanOracle* oracle, Rng rng) : oracle_(oracle), rng_(rng) {}
  const BooleanOracle* oracle_;
  Rng rng_;
};

class TorusOracleStream {
 public:
  cplx query(double t);

 private:
  friend class TorusOracle;
  TorusOracleStream(const TorusOracle* oracle, Rng rng) : oracle_(oracle), rng_(rng) {}
  const TorusOracle* oracle_;
  Rng rng_;
};

class BooleanOracle {
 public:
  BooleanOracle(BooleanSpectrum truth, NoiseParams params);
  BooleanOracle(BooleanSpectrum truth, NoiseParams params, BooleanSpectrum decoy);

  int n() const { return truth_.n(); }
  const BooleanSpectrum& truth() const { return truth_; }

  double query(const FreqVec& x) { return default_stream_.query(x); }
  BooleanOracleStream stream(std::uint64_t id) const;

  OracleStats stats() const;

 private:
  friend class BooleanOracleStream;
  double respond(const FreqVec& x, Rng& rng) const;
  bool sticky_outlier(const FreqVec& x) const;
  double truth_value(const FreqVec& x) const;
  double inlier_value(const FreqVec& x, double fx, Rng& rng) const;
  double outlier_value(const FreqVec& x) const;

  BooleanSpectrum truth_;
  BooleanSpectrum decoy_;
  NoiseParams params_;
  double truth_norm1_ = 0.0;
  std::vector<bool> marked_;  // exact-count adversarial mark, n <= 22
  std::shared_ptr<detail::StatsBlock> stats_;
  BooleanOracleStream default_stream_;
};

class TorusOracle {
 public:
  TorusOracle(TorusSpectrum truth, NoiseParams params);
  TorusOracle(TorusSpectrum truth, NoiseParams params, TorusSpectrum decoy);

  const TorusSpectrum& truth() const { return truth_; }

  cplx query(double t) { return default_stream_.query(t); }
  TorusOracleStream stream(std::uint64_t id) const;

  // Registers one decode's sample points for the separation audit.
  void register_batch(const std::vector<double>& times) const;
  OracleStats stats() const;

 private:
  friend class TorusOracleStream;
  cplx respond(double t, Rng& rng) const;
  bool sticky_outlier(double t) const;
  cplx inlier_value(double t, cplx ft, Rng& rng) const;
  cplx outlier_value(double t) const;

  TorusSpectrum truth_;
  TorusSpectrum decoy_;
  NoiseParams params_;
  double truth_norm1_ = 0.0;
  std::shared_ptr<detail::StatsBlock> stats_;
  TorusOracleStream default_stream_;
};

}  // namespace rsfft
