#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rsfft/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string model = "random";
  std::string inlier = "uniform";
  std::string outlier = "large-constant";
};

// Mirrors the JSON config keys onto flags; values given on the command line
// override the loaded config file.
void add_common(CLI::App* cmd, rsfft::ExperimentConfig& cfg, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config; flags override its values");
  cmd->add_option("--trials", cfg.trials, "number of seeded trials");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--output", cfg.output, "base path for <output>.csv and <output>.json");
  cmd->add_option("--n", cfg.n, "cube dimension");
  cmd->add_option("--F", cfg.bandlimit, "torus bandlimit");
  cmd->add_option("--k", cfg.k, "sparsity");
  cmd->add_option("--d", cfg.d, "polynomial degree");
  cmd->add_option("--eta", cfg.eta, "coefficient floor / granularity");
  cmd->add_option("--rho", cfg.noise.rho, "outlier rate");
  cmd->add_option("--eps", cfg.noise.epsilon, "inlier error bound");
  cmd->add_option("--model", flags.model, "noise model: random|random-sticky|adversarial");
  cmd->add_option("--inlier", flags.inlier, "inlier strategy: uniform|worst-sign");
  cmd->add_option("--outlier", flags.outlier,
                  "outlier strategy: large-constant|zero|decoy");
  cmd->add_option("--delta", cfg.delta, "analysis slack (default derived from rho)");
  cmd->add_option("--inner-c", cfg.inner_c, "per-bucket sample constant");
  cmd->add_option("--inner-m", cfg.inner_m, "per-bucket sample override");
  cmd->add_option("--sigma", cfg.sigma, "budget sweep step override");
  cmd->add_option("--ell", cfg.ell, "bucket dimension override");
  cmd->add_option("--refit-c", cfg.refit_c, "refit sample constant");
  cmd->add_option("--refit-m", cfg.refit_m, "refit sample override");
  cmd->add_option("--prime-floor", cfg.prime_floor, "bucketing prime floor");
  cmd->add_option("--prime-pool", cfg.prime_pool, "bucketing prime pool size");
  cmd->add_option("--lowdeg-c", cfg.lowdeg_c, "low-degree sample constant");
  cmd->add_option("--lowdeg-m", cfg.lowdeg_m, "low-degree sample override");
  cmd->add_option("--gran-c", cfg.gran_c, "granular sample constant");
  cmd->add_option("--gran-m", cfg.gran_m, "granular sample override");
  cmd->add_option("--gran-eps", cfg.gran_eps, "granular acceptance tolerance");
  cmd->add_option("--claim", cfg.claim,
                  "concentration claim: ell1|ell2|isolation-boolean|isolation-torus|family");
  cmd->add_option("--check-m", cfg.check_m, "concentration sample count");
  cmd->add_option("--check-trials", cfg.check_trials, "concentration trials");
  cmd->add_option("--alpha", cfg.alpha, "anti-concentration mass parameter");
  cmd->add_option("--grid", cfg.grid, "probe grid size");
  cmd->add_option("--min-success-rate",
                  [&cfg](const std::vector<std::string>& vals) {
                    cfg.min_success_rate = std::stod(vals.front());
                    return true;
                  },
                  "exit nonzero when the success rate falls below this");
}

rsfft::ExperimentConfig finalize(CLI::App* cmd, rsfft::ExperimentConfig cli_cfg,
                                 CommonFlags& flags, const std::string& algorithm) {
  rsfft::ExperimentConfig cfg = cli_cfg;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::runtime_error("cannot read config: " + flags.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = rsfft::config_from_json(buf.str());
    // Flags the user actually passed win over the file.
    const auto passed = [&](const std::string& name) {
      const auto* opt = cmd->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (passed("--trials")) cfg.trials = cli_cfg.trials;
    if (passed("--seed")) cfg.seed = cli_cfg.seed;
    if (passed("--output")) cfg.output = cli_cfg.output;
    if (passed("--n")) cfg.n = cli_cfg.n;
    if (passed("--F")) cfg.bandlimit = cli_cfg.bandlimit;
    if (passed("--k")) cfg.k = cli_cfg.k;
    if (passed("--d")) cfg.d = cli_cfg.d;
    if (passed("--eta")) cfg.eta = cli_cfg.eta;
    if (passed("--rho")) cfg.noise.rho = cli_cfg.noise.rho;
    if (passed("--eps")) cfg.noise.epsilon = cli_cfg.noise.epsilon;
    if (passed("--delta")) cfg.delta = cli_cfg.delta;
    if (passed("--inner-c")) cfg.inner_c = cli_cfg.inner_c;
    if (passed("--inner-m")) cfg.inner_m = cli_cfg.inner_m;
    if (passed("--sigma")) cfg.sigma = cli_cfg.sigma;
    if (passed("--ell")) cfg.ell = cli_cfg.ell;
    if (passed("--refit-c")) cfg.refit_c = cli_cfg.refit_c;
    if (passed("--refit-m")) cfg.refit_m = cli_cfg.refit_m;
    if (passed("--prime-floor")) cfg.prime_floor = cli_cfg.prime_floor;
    if (passed("--prime-pool")) cfg.prime_pool = cli_cfg.prime_pool;
    if (passed("--lowdeg-c")) cfg.lowdeg_c = cli_cfg.lowdeg_c;
    if (passed("--lowdeg-m")) cfg.lowdeg_m = cli_cfg.lowdeg_m;
    if (passed("--gran-c")) cfg.gran_c = cli_cfg.gran_c;
    if (passed("--gran-m")) cfg.gran_m = cli_cfg.gran_m;
    if (passed("--gran-eps")) cfg.gran_eps = cli_cfg.gran_eps;
    if (passed("--claim")) cfg.claim = cli_cfg.claim;
    if (passed("--check-m")) cfg.check_m = cli_cfg.check_m;
    if (passed("--check-trials")) cfg.check_trials = cli_cfg.check_trials;
    if (passed("--alpha")) cfg.alpha = cli_cfg.alpha;
    if (passed("--grid")) cfg.grid = cli_cfg.grid;
    if (passed("--min-success-rate")) cfg.min_success_rate = cli_cfg.min_success_rate;
    if (passed("--model") || passed("--inlier") || passed("--outlier")) {
      // fall through to the string translation below
    } else {
      flags.model.clear();
      flags.inlier.clear();
      flags.outlier.clear();
    }
  }
  if (!flags.model.empty()) {
    if (flags.model == "random")
      cfg.noise.model = rsfft::NoiseModel::kRandom;
    else if (flags.model == "random-sticky")
      cfg.noise.model = rsfft::NoiseModel::kRandomSticky;
    else if (flags.model == "adversarial")
      cfg.noise.model = rsfft::NoiseModel::kAdversarial;
    else
      throw std::runtime_error("unknown --model " + flags.model);
  }
  if (!flags.inlier.empty()) cfg.noise.inlier = rsfft::inlier_strategy_from_name(flags.inlier);
  if (!flags.outlier.empty())
    cfg.noise.outlier = rsfft::outlier_strategy_from_name(flags.outlier);
  cfg.algorithm = algorithm;
  return cfg;
}

int run_recovery(const rsfft::ExperimentConfig& cfg) {
  const auto table = rsfft::run_experiment(cfg);
  std::printf("%s: trials=%d success_rate=%.4f%s\n", cfg.algorithm.c_str(), cfg.trials,
              table.success_rate, table.pass ? "" : " (below threshold)");
  if (cfg.output.empty()) std::fputs(table.csv.c_str(), stdout);
  return table.pass ? 0 : 1;
}

int run_lab(const rsfft::ExperimentConfig& cfg) {
  const auto table = cfg.algorithm == "concentration-check"
                         ? rsfft::run_concentration_check(cfg)
                         : rsfft::run_anticoncentration(cfg);
  std::fputs(table.csv.c_str(), stdout);
  return table.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outlier-robust sparse Fourier recovery lab"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd;
    rsfft::ExperimentConfig cfg;
    CommonFlags flags;
    std::string name;
  };
  std::vector<Sub> subs;
  for (const char* name : {"boolean-recover", "torus-recover", "lowdeg-recover",
                           "granular-recover", "concentration-check", "anticoncentration"}) {
    Sub sub;
    sub.name = name;
    sub.cmd = app.add_subcommand(name);
    subs.push_back(std::move(sub));
  }
  for (auto& sub : subs) add_common(sub.cmd, sub.cfg, sub.flags);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& sub : subs) {
      if (!sub.cmd->parsed()) continue;
      const auto cfg = finalize(sub.cmd, sub.cfg, sub.flags, sub.name);
      if (sub.name == "concentration-check" || sub.name == "anticoncentration")
        return run_lab(cfg);
      return run_recovery(cfg);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
