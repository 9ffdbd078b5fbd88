#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsfft/boolean_sfft.hpp"
#include "rsfft/conclab.hpp"
#include "rsfft/granular.hpp"
#include "rsfft/lowdeg.hpp"
#include "rsfft/noise.hpp"
#include "rsfft/torus_sfft.hpp"

namespace rsfft {

// One experiment = one algorithm, one noise setting, `trials` seeded runs.
// Parsed from JSON with unknown keys rejected; CLI flags mirror the keys.
struct ExperimentConfig {
  std::string algorithm;  // boolean-recover | torus-recover | lowdeg-recover |
                          // granular-recover | concentration-check | anticoncentration
  int trials = 1;
  std::uint64_t seed = 0;
  std::string output;  // base path; writes <output>.csv and <output>.json

  // Domain.
  int n = 8;
  std::int64_t bandlimit = 64;
  int k = 1;
  int d = 1;
  double eta = 1.0;

  // Noise.
  NoiseParams noise;

  // Tunable constants (defaults follow the module defaults).
  double delta = 0.0;  // <= 0: derived as 1/2 - rho where meaningful
  double inner_c = 8.0;
  long long inner_m = 0;
  double sigma = 0.0;
  int ell = 0;
  double refit_c = 8.0;
  long long refit_m = 0;
  double prime_floor = 0.0;
  int prime_pool = 1000;
  double lowdeg_c = 4.0;
  long long lowdeg_m = 0;
  double gran_c = 2.0;
  long long gran_m = 0;
  double gran_eps = 1e-4;

  // concentration-check inputs.
  std::string claim = "ell1";  // ell1 | ell2 | isolation-boolean | isolation-torus | family
  long long check_m = 0;
  int check_trials = 200;

  // anticoncentration inputs.
  double alpha = 0.5;
  std::size_t grid = 1 << 14;

  std::optional<double> min_success_rate;  // exit-code gate

  double effective_delta() const;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

struct RecoveryReport {
  int trial = 0;
  bool support_exact = false;
  double linf_err = 0.0;
  double l2_err = 0.0;
  std::uint64_t queries = 0;
  std::uint64_t outliers = 0;
  std::optional<double> batch_separation;
  std::optional<double> global_separation;
  double runtime_ms = 0.0;  // JSON only; the CSV stays byte-stable across runs
  bool algorithm_failed = false;
};

struct ExperimentTable {
  ExperimentConfig config;
  std::vector<RecoveryReport> reports;
  double success_rate = 0.0;
  std::string csv;   // one row per trial, committed column order
  std::string json;  // config echo + per-trial reports + summary
  bool pass = true;  // against min_success_rate when set
};

// Ground truth generators; magnitudes uniform in [eta, 2*eta] with random
// sign/phase. Granular mode redraws until the snapped lattice tuple satisfies
// the unit power budget.
BooleanSpectrum boolean_truth(int n, int k, double eta, Rng& rng);
TorusSpectrum torus_truth(std::int64_t bandlimit, int k, double eta, Rng& rng);
TorusSpectrum granular_truth(std::int64_t bandlimit, int k, double eta, Rng& rng);
BooleanSpectrum lowdeg_truth(int n, int d, double eta, Rng& rng);

// Runs the four recovery algorithms trial-by-trial.
ExperimentTable run_experiment(const ExperimentConfig& cfg);

// Lab verdicts (concentration-check / anticoncentration); CSV rows
// (claim, m, trials, p50, p95, max, pass).
struct LabRow {
  std::string claim;
  long long m = 0;
  int trials = 0;
  double p50 = 0.0;
  double p95 = 0.0;
  double max = 0.0;
  bool pass = true;
};
struct LabTable {
  std::vector<LabRow> rows;
  std::string csv;
  std::string json;
  bool pass = true;
};
LabTable run_concentration_check(const ExperimentConfig& cfg);
LabTable run_anticoncentration(const ExperimentConfig& cfg);

// Writes table.csv / table.json next to cfg.output; no-op for empty output.
void write_outputs(const std::string& base, const std::string& csv, const std::string& json);

}  // namespace rsfft
