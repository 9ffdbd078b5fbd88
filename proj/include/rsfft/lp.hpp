#pragma once

#include <string>
#include <vector>

namespace rsfft {

enum class Relation { kLe, kGe, kEq };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit };

std::string to_string(LpStatus s);

// min c.x  subject to  row.coeffs . x (<=|>=|=) row.rhs,  x >= 0.
// Builders encode free variables as differences of nonnegative pairs.
struct LpProblem {
  struct Row {
    std::vector<double> coeffs;
    Relation rel = Relation::kLe;
    double rhs = 0.0;
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<std::string> var_names;  // optional, for dumps

  void validate() const;
};

struct LpOptions {
  double pivot_tol = 1e-10;  // smallest admissible pivot element
  double dual_tol = 1e-7;    // reduced costs above -dual_tol read as optimal
  double feas_tol = 1e-7;    // relative feasibility check on the reported solution
  long long max_iters = 0;   // 0 = automatic from problem size
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;
  double objective = 0.0;
  // Zero reduced cost on some nonbasic column at the optimum: another optimal
  // vertex may exist. The terminal vertex itself is deterministic.
  bool possibly_nonunique = false;
  long long iterations = 0;
};

// Basis carried between structurally identical solves (same rows/relations,
// different rhs), e.g. along a budget sweep where each step only relaxes a
// constraint and the previous optimal basis stays primal-feasible.
struct LpWarmState {
  std::vector<int> basis;
};

// Dense two-phase simplex. Dantzig pricing with a permanent Bland fallback
// once the objective stalls (anti-cycling); the tableau is refactorized from
// the original data periodically and before optimality is accepted, so the
// terminal vertex is deterministic and numerically audited.
LpSolution solve_lp(const LpProblem& p, const LpOptions& opts = {},
                    LpWarmState* warm = nullptr);

// Plain-text canonical dump (objective row, then constraint rows).
std::string lp_to_text(const LpProblem& p);

}  // namespace rsfft
