#include "rsfft/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rsfft {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterLimit: return "iteration-limit";
  }
  return "unknown";
}

void LpProblem::validate() const {
  if (num_vars <= 0) throw std::invalid_argument("LpProblem: num_vars must be positive");
  if (static_cast<int>(objective.size()) != num_vars)
    throw std::invalid_argument("LpProblem: objective size mismatch");
  for (double c : objective)
    if (!std::isfinite(c)) throw std::invalid_argument("LpProblem: non-finite objective");
  for (const Row& r : rows) {
    if (static_cast<int>(r.coeffs.size()) != num_vars)
      throw std::invalid_argument("LpProblem: row size mismatch");
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("LpProblem: non-finite rhs");
    for (double c : r.coeffs)
      if (!std::isfinite(c)) throw std::invalid_argument("LpProblem: non-finite coefficient");
  }
}

namespace {

// Dense two-phase simplex with periodic refactorization from the original
// data, so pivot-error accumulation cannot corrupt pricing. Optimality is
// only declared after it survives a fresh factorization.
// Column layout: [structural | slack/surplus | artificial]; rhs kept apart.
class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& opts) : opts_(opts) {
    m_ = static_cast<int>(p.rows.size());
    n_struct_ = p.num_vars;

    std::vector<double> sign(m_, 1.0);
    std::vector<Relation> rel(m_);
    for (int i = 0; i < m_; ++i) {
      rel[i] = p.rows[i].rel;
      if (p.rows[i].rhs < 0.0) {
        sign[i] = -1.0;
        if (rel[i] == Relation::kLe)
          rel[i] = Relation::kGe;
        else if (rel[i] == Relation::kGe)
          rel[i] = Relation::kLe;
      }
    }
    int n_slack = 0;
    for (int i = 0; i < m_; ++i)
      if (p.rows[i].rel != Relation::kEq) ++n_slack;
    n_art_ = 0;
    for (int i = 0; i < m_; ++i)
      if (rel[i] != Relation::kLe) ++n_art_;

    first_art_ = n_struct_ + n_slack;
    cols_ = first_art_ + n_art_;

    orig_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
    orig_rhs_.assign(m_, 0.0);
    basis_.assign(m_, -1);
    in_basis_.assign(cols_, false);

    int next_slack = n_struct_;
    int next_art = first_art_;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_struct_; ++j) orig_at(i, j) = sign[i] * p.rows[i].coeffs[j];
      orig_rhs_[i] = sign[i] * p.rows[i].rhs;
      if (p.rows[i].rel != Relation::kEq) {
        orig_at(i, next_slack) = (rel[i] == Relation::kLe) ? 1.0 : -1.0;
        if (rel[i] == Relation::kLe) basis_[i] = next_slack;
        ++next_slack;
      }
      if (rel[i] != Relation::kLe) {
        orig_at(i, next_art) = 1.0;
        basis_[i] = next_art;
        ++next_art;
      }
    }
    for (int b : basis_) in_basis_[b] = true;

    tab_ = orig_;
    rhs_ = orig_rhs_;
    obj_.assign(cols_, 0.0);

    max_iters_ = opts.max_iters > 0
                     ? opts.max_iters
                     : 400LL * (static_cast<long long>(m_) + cols_) + 50000LL;
  }

  LpStatus run(const std::vector<double>& objective, LpWarmState* warm) {
    struct_obj_ = objective;
    if (!try_warm_start(warm)) {
      if (n_art_ > 0) {
        phase2_ = false;
        price();
        if (!converge()) return status_;
        const double art_sum = artificial_mass();
        if (art_sum > opts_.feas_tol * (1.0 + rhs_scale())) {
          status_ = LpStatus::kInfeasible;
          return status_;
        }
        drive_out_artificials();
      }
      phase2_ = true;
      refactor();
    }
    price();
    if (!converge()) return status_;
    status_ = LpStatus::kOptimal;
    if (warm) warm->basis = basis_;
    return status_;
  }

  // Adopts a caller-provided basis when it is structurally valid. The basis
  // is dual-feasible whenever it was optimal for the same problem with a
  // different rhs, so primal infeasibility (negative basics) is repaired by
  // dual simplex; any trouble falls back to a cold start.
  bool try_warm_start(LpWarmState* warm) {
    if (!warm || static_cast<int>(warm->basis.size()) != m_) return false;
    for (int b : warm->basis)
      if (b < 0 || b >= cols_) return false;
    const auto saved_basis = basis_;
    basis_ = warm->basis;
    std::fill(in_basis_.begin(), in_basis_.end(), false);
    for (int b : basis_) in_basis_[b] = true;
    refactor();
    bool sane = true;
    for (int i = 0; i < m_; ++i) {
      // A singular adopted basis leaves a non-unit basis column after the
      // refactorization sweep.
      if (std::abs(at(i, basis_[i]) - 1.0) > 1e-6) {
        sane = false;
        break;
      }
    }
    if (sane) {
      phase2_ = true;
      price();
      sane = dual_loop();
    }
    if (!sane) {
      basis_ = saved_basis;
      std::fill(in_basis_.begin(), in_basis_.end(), false);
      for (int b : basis_) in_basis_[b] = true;
      tab_ = orig_;
      rhs_ = orig_rhs_;
      phase2_ = false;
      status_ = LpStatus::kOptimal;
      return false;
    }
    for (int i = 0; i < m_; ++i) rhs_[i] = std::max(0.0, rhs_[i]);
    return true;
  }

  // Dual simplex: restore primal feasibility while keeping reduced costs
  // nonnegative. Returns false when it cannot (caller then cold-starts).
  bool dual_loop() {
    const double tol = 1e-9 * (1.0 + rhs_scale());
    long long since_refactor = 0;
    for (;;) {
      if (++iters_ > max_iters_) return false;
      if (++since_refactor >= 512) {
        refactor();
        price();
        since_refactor = 0;
      }
      int leave = -1;
      double worst = -tol;
      for (int i = 0; i < m_; ++i) {
        if (rhs_[i] < worst) {
          worst = rhs_[i];
          leave = i;
        }
      }
      if (leave < 0) return true;  // primal feasible again
      int enter = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int j = 0; j < first_art_; ++j) {
        if (in_basis_[j]) continue;
        const double arj = at(leave, j);
        if (arj < -opts_.pivot_tol) {
          const double ratio = std::max(0.0, obj_[j]) / (-arj);
          if (ratio < best_ratio - 1e-12 || (ratio < best_ratio + 1e-12 && (enter < 0 || j < enter))) {
            best_ratio = ratio;
            enter = j;
          }
        }
      }
      if (enter < 0) return false;  // dual ray: primal infeasible at this rhs
      pivot(leave, enter);
    }
  }

  LpSolution extract(const LpProblem& p) const {
    LpSolution sol;
    sol.status = status_;
    sol.iterations = iters_;
    if (status_ != LpStatus::kOptimal) return sol;
    sol.values.assign(n_struct_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && basis_[i] < n_struct_)
        sol.values[basis_[i]] = std::max(0.0, rhs_[i]);
    double obj = 0.0;
    for (int j = 0; j < n_struct_; ++j) obj += p.objective[j] * sol.values[j];
    sol.objective = obj;
    for (int j = 0; j < first_art_; ++j) {
      if (in_basis_[j]) continue;
      if (std::abs(obj_[j]) <= 10.0 * opts_.dual_tol) {
        sol.possibly_nonunique = true;
        break;
      }
    }
    return sol;
  }

  LpStatus status() const { return status_; }

 private:
  double& orig_at(int r, int c) { return orig_[static_cast<std::size_t>(r) * cols_ + c]; }
  double orig_at(int r, int c) const { return orig_[static_cast<std::size_t>(r) * cols_ + c]; }
  double& at(int r, int c) { return tab_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return tab_[static_cast<std::size_t>(r) * cols_ + c]; }

  double rhs_scale() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s = std::max(s, std::abs(orig_rhs_[i]));
    return s;
  }

  double artificial_mass() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= first_art_) s += std::max(0.0, rhs_[i]);
    return s;
  }

  // Rebuild tab_ = B^{-1} A and rhs_ = B^{-1} b from the original data by
  // Gauss-Jordan elimination of the basis columns with partial pivoting.
  void refactor() {
    const int n = m_;
    const std::size_t stride = static_cast<std::size_t>(n) + 1 + cols_;
    std::vector<double> work(static_cast<std::size_t>(n) * stride);
    for (int i = 0; i < n; ++i) {
      double* row = &work[static_cast<std::size_t>(i) * stride];
      for (int r = 0; r < n; ++r) row[r] = orig_at(i, basis_[r]);
      row[n] = orig_rhs_[i];
      for (int c = 0; c < cols_; ++c) row[n + 1 + c] = orig_at(i, c);
    }
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      double best = 1e-12;
      for (int i = col; i < n; ++i) {
        const double mag = std::abs(work[static_cast<std::size_t>(i) * stride + col]);
        if (mag > best) {
          best = mag;
          piv = i;
        }
      }
      if (piv < 0) continue;  // numerically singular direction; best effort
      if (piv != col) {
        double* a = &work[static_cast<std::size_t>(col) * stride];
        double* b = &work[static_cast<std::size_t>(piv) * stride];
        std::swap_ranges(a, a + stride, b);
      }
      double* prow = &work[static_cast<std::size_t>(col) * stride];
      const double inv = 1.0 / prow[col];
      for (std::size_t j = 0; j < stride; ++j) prow[j] *= inv;
      prow[col] = 1.0;
      for (int i = 0; i < n; ++i) {
        if (i == col) continue;
        double* row = &work[static_cast<std::size_t>(i) * stride];
        const double f = row[col];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < stride; ++j) row[j] -= f * prow[j];
        row[col] = 0.0;
      }
    }
    const double clamp = 1e-9 * (1.0 + rhs_scale());
    for (int r = 0; r < n; ++r) {
      const double* row = &work[static_cast<std::size_t>(r) * stride];
      rhs_[r] = row[n];
      if (rhs_[r] < 0.0 && rhs_[r] > -clamp) rhs_[r] = 0.0;
      for (int c = 0; c < cols_; ++c) at(r, c) = row[n + 1 + c];
    }
  }

  // Reduced costs for the active phase, priced on the current basis rows.
  void price() {
    std::fill(obj_.begin(), obj_.end(), 0.0);
    obj_rhs_ = 0.0;
    if (!phase2_) {
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] < first_art_) continue;
        for (int c = 0; c < cols_; ++c) obj_[c] -= at(i, c);
        obj_rhs_ -= rhs_[i];
      }
    } else {
      for (int j = 0; j < n_struct_; ++j) obj_[j] = struct_obj_[j];
      for (int i = 0; i < m_; ++i) {
        const int b = basis_[i];
        const double cb = (b >= 0 && b < n_struct_) ? struct_obj_[b] : 0.0;
        if (cb == 0.0) continue;
        for (int c = 0; c < cols_; ++c) obj_[c] -= cb * at(i, c);
        obj_rhs_ -= cb * rhs_[i];
      }
    }
  }

  bool has_entering() const {
    for (int j = 0; j < first_art_; ++j)
      if (!in_basis_[j] && obj_[j] < -opts_.dual_tol) return true;
    return false;
  }

  // Iterate to a local optimum, then confirm it on a fresh factorization.
  bool converge() {
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (!loop()) return false;
      refactor();
      price();
      if (!phase2_ && phase1_done()) return true;
      if (!has_entering()) return true;
    }
    status_ = LpStatus::kIterLimit;  // never settles on fresh numbers
    return false;
  }

  // Phase 1 is about feasibility, not optimality: stop once the artificial
  // mass is gone (obj_rhs_ tracks its negation).
  bool phase1_done() const {
    return obj_rhs_ >= -1e-11 * (1.0 + rhs_scale());
  }

  // Dantzig pricing; after a stall without objective progress, Bland's rule
  // permanently (anti-cycling).
  bool loop() {
    long long since_progress = 0;
    long long since_refactor = 0;
    double last_obj = obj_rhs_;
    for (;;) {
      if (++iters_ > max_iters_) {
        status_ = LpStatus::kIterLimit;
        return false;
      }
      if (!phase2_ && phase1_done()) return true;
      if (++since_refactor >= 512) {
        refactor();
        price();
        since_refactor = 0;
      }
      int enter = -1;
      if (bland_) {
        for (int j = 0; j < first_art_; ++j) {
          if (!in_basis_[j] && obj_[j] < -opts_.dual_tol) {
            enter = j;
            break;
          }
        }
      } else {
        double best = -opts_.dual_tol;
        for (int j = 0; j < first_art_; ++j) {
          if (!in_basis_[j] && obj_[j] < best) {
            best = obj_[j];
            enter = j;
          }
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double aij = at(i, enter);
        if (aij > opts_.pivot_tol) {
          const double ratio = std::max(0.0, rhs_[i]) / aij;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) {
        status_ = phase2_ ? LpStatus::kUnbounded : LpStatus::kIterLimit;
        return false;
      }
      pivot(leave, enter);

      // Tableau convention: obj_rhs_ = -(phase objective), non-decreasing.
      if (obj_rhs_ > last_obj + 1e-10 * (1.0 + std::abs(last_obj))) {
        last_obj = obj_rhs_;
        since_progress = 0;
      } else if (++since_progress > 128 && !bland_) {
        bland_ = true;
      }
    }
  }

  void pivot(int prow, int pcol) {
    double* prow_ptr = &tab_[static_cast<std::size_t>(prow) * cols_];
    const double inv = 1.0 / prow_ptr[pcol];
    for (int j = 0; j < cols_; ++j) prow_ptr[j] *= inv;
    rhs_[prow] = std::max(0.0, rhs_[prow] * inv);
    prow_ptr[pcol] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == prow) continue;
      double* row = &tab_[static_cast<std::size_t>(i) * cols_];
      const double f = row[pcol];
      if (f == 0.0) continue;
      for (int j = 0; j < cols_; ++j) row[j] -= f * prow_ptr[j];
      row[pcol] = 0.0;
      rhs_[i] -= f * rhs_[prow];
    }
    const double fo = obj_[pcol];
    if (fo != 0.0) {
      for (int j = 0; j < cols_; ++j) obj_[j] -= fo * prow_ptr[j];
      obj_[pcol] = 0.0;
      obj_rhs_ -= fo * rhs_[prow];
    }
    in_basis_[basis_[prow]] = false;
    in_basis_[pcol] = true;
    basis_[prow] = pcol;
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < first_art_) continue;
      int enter = -1;
      for (int j = 0; j < first_art_; ++j) {
        if (!in_basis_[j] && std::abs(at(i, j)) > 1e-8) {
          enter = j;
          break;
        }
      }
      if (enter >= 0)
        pivot(i, enter);
      else
        rhs_[i] = 0.0;  // redundant row; the artificial stays basic at zero
    }
  }

  LpOptions opts_;
  int m_ = 0, cols_ = 0, n_struct_ = 0, n_art_ = 0, first_art_ = 0;
  std::vector<double> orig_, orig_rhs_;
  std::vector<double> tab_, rhs_, obj_;
  double obj_rhs_ = 0.0;
  std::vector<double> struct_obj_;
  std::vector<int> basis_;
  std::vector<bool> in_basis_;
  bool phase2_ = false;
  bool bland_ = false;
  LpStatus status_ = LpStatus::kOptimal;
  long long iters_ = 0;
  long long max_iters_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, const LpOptions& opts, LpWarmState* warm) {
  p.validate();
  Simplex s(p, opts);
  s.run(p.objective, warm);
  LpSolution sol = s.extract(p);
  if (sol.status != LpStatus::kOptimal) return sol;

  // Feasibility audit at the configured relative tolerance.
  for (const auto& row : p.rows) {
    double lhs = 0.0;
    for (int j = 0; j < p.num_vars; ++j) lhs += row.coeffs[j] * sol.values[j];
    const double slackness = lhs - row.rhs;
    const double scale = opts.feas_tol * (1.0 + std::abs(row.rhs));
    const bool ok = (row.rel == Relation::kLe)   ? slackness <= scale
                    : (row.rel == Relation::kGe) ? slackness >= -scale
                                                 : std::abs(slackness) <= scale;
    if (!ok) {
      sol.status = LpStatus::kIterLimit;  // numerical trouble; report as non-optimal
      return sol;
    }
  }
  return sol;
}

std::string lp_to_text(const LpProblem& p) {
  std::ostringstream os;
  os.precision(17);
  os << "min";
  for (int j = 0; j < p.num_vars; ++j) os << ' ' << p.objective[j];
  os << '\n';
  for (const auto& row : p.rows) {
    for (int j = 0; j < p.num_vars; ++j) os << row.coeffs[j] << ' ';
    os << (row.rel == Relation::kLe ? "<=" : row.rel == Relation::kGe ? ">=" : "=") << ' '
       << row.rhs << '\n';
  }
  return os.str();
}

}  // namespace rsfft
