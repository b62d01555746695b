#pragma once
// Bounded-variable revised simplex over sparse columns, built for the master
// relaxations: maximize c.x subject to rows (<= or =) and column bounds.
//
// The basis inverse is kept as a product of sparse eta factors, rebuilt from
// the current basis every kRefactorEvery pivots (near-triangular bases make
// that cheap). Re-solves after bound changes or row additions start from the
// previous basis, which stays dual feasible, so the dual simplex does the
// incremental work; cold or dual-infeasible starts fall back to a composite
// phase-1 primal simplex. Anti-cycling: Bland's rule after a long streak of
// pivots with no objective movement. Tie-breaking is by smallest index, so
// identical inputs produce identical runs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "flowsched/errors.hpp"

namespace flowsched {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFeasTol = 1e-7;   // primal bound violation tolerance
inline constexpr double kOptTol = 1e-9;    // reduced-cost tolerance
inline constexpr double kPivotTol = 1e-9;  // smallest acceptable pivot
inline constexpr int kBlandStreak = 1000;  // stalled pivots before Bland's rule
inline constexpr int kRefactorEvery = 150;
inline constexpr double kPerturb = 1e-7;  // dual anti-degeneracy cost noise

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

enum class Relation : char { kLe, kEq };

struct LpRow {
  std::vector<std::pair<int, double>> terms;  // (column, coefficient)
  Relation rel = Relation::kLe;
  double rhs = 0;
};

struct LpColumn {
  double lo = 0;
  double up = kInf;
};

struct LinearProgram {
  std::vector<double> objective;  // maximized
  std::vector<LpColumn> columns;
  std::vector<LpRow> rows;

  int add_column(double lo, double up, double obj) {
    columns.push_back({lo, up});
    objective.push_back(obj);
    return static_cast<int>(columns.size()) - 1;
  }
  void add_row(std::vector<std::pair<int, double>> terms, Relation rel, double rhs) {
    rows.push_back({std::move(terms), rel, rhs});
  }
};

// Column states. Exactly one kBasic entry per row; the rest sit at a bound.
enum : signed char { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

struct LpBasis {
  std::vector<signed char> vstat;  // structural columns first, then row slacks
};

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0;
  std::vector<double> primal;  // structural columns only
  LpBasis basis;
};

class LpSolver {
 public:
  explicit LpSolver(const LinearProgram& lp) {
    n_ = static_cast<int>(lp.columns.size());
    detail::require(lp.objective.size() == lp.columns.size(),
                    "objective length does not match column count");
    obj_ = lp.objective;
    lo_.resize(n_);
    up_.resize(n_);
    cols_.resize(n_);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.columns[j].lo;
      up_[j] = lp.columns[j].up;
      detail::require(lo_[j] <= up_[j], "column bounds crossed");
    }
    for (const LpRow& row : lp.rows) add_row(row);
  }

  int add_row(const LpRow& row) {
    int r = m_++;
    rhs_.push_back(row.rhs);
    double slack_up = row.rel == Relation::kLe ? kInf : 0.0;
    lo_.push_back(0.0);
    up_.push_back(slack_up);
    obj_.push_back(0.0);
    cols_.push_back({{r, 1.0}});
    rows_.emplace_back();
    for (auto [j, a] : row.terms) {
      detail::require(j >= 0 && j < n_, "row references a missing column");
      if (a != 0.0) {
        cols_[j].push_back({r, a});
        rows_[r].push_back({j, a});  // structural terms; the slack is implicit
      }
    }
    if (!vstat_.empty()) {
      vstat_.push_back(kBasic);  // the new slack joins the basis
      needs_refactor_ = true;
    }
    return r;
  }

  void set_bounds(int col, double lo, double up) {
    detail::require(col >= 0 && col < n_, "bound change on a missing column");
    detail::require(lo <= up, "column bounds crossed");
    lo_[col] = lo;
    up_[col] = up;
  }
  double lower(int col) const { return lo_[col]; }
  double upper(int col) const { return up_[col]; }

  LpStatus solve() {
    status_ = run();
    if (status_ != LpStatus::kOptimal) return status_;
    // Trust nothing: rebuild the factorization, recompute the point, and
    // re-check both feasibilities before reporting optimal.
    for (int attempt = 0; attempt < 3; ++attempt) {
      refactorize();
      compute_x();
      if (worst_violation().second <= kFeasTol * 10 && dual_feasible()) {
        return status_;
      }
      status_ = run();
      if (status_ != LpStatus::kOptimal) return status_;
    }
    return status_ = LpStatus::kNumericalFailure;
  }

  LpStatus status() const { return status_; }

  double objective() const {
    double v = 0;
    for (int j = 0; j < n_; ++j) v += obj_[j] * x_[j];
    return v;
  }
  double value(int col) const { return x_[col]; }
  std::vector<double> primal() const { return {x_.begin(), x_.begin() + n_}; }

  LpBasis basis() const { return {vstat_}; }
  void set_basis(const LpBasis& basis) {
    if (static_cast<int>(basis.vstat.size()) != n_ + m_) return;  // stale, ignore
    int basics = 0;
    for (signed char s : basis.vstat) basics += s == kBasic;
    if (basics != m_) return;
    vstat_ = basis.vstat;
    needs_refactor_ = true;
  }

  int rows() const { return m_; }
  int columns() const { return n_; }

  // Cumulative work statistics, never reset.
  long long pivot_count() const { return pivots_total_; }
  long long refactor_count() const { return refactors_total_; }
  long long fallback_count() const { return fallback_total_; }
  long long eta_entries() const {
    long long s = 0;
    for (const Eta& e : etas_) s += 1 + static_cast<long long>(e.col.size());
    return s;
  }

 private:
  struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> col;  // entries excluding the pivot row
  };

  // ---- factorized basis operations ----

  // v <- B^{-1} v
  void ftran(std::vector<double>& v) const {
    for (const Eta& e : etas_) {
      double t = v[e.row];
      if (t == 0.0) continue;
      t /= e.pivot;
      for (auto [i, a] : e.col) v[i] -= a * t;
      v[e.row] = t;
    }
  }

  // v <- (B^{-1})^T v
  void btran(std::vector<double>& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->row];
      for (auto [i, a] : it->col) s -= a * v[i];
      v[it->row] = s / it->pivot;
    }
  }

  double dot_col(int j, const std::vector<double>& v) const {
    double s = 0;
    for (auto [r, a] : cols_[j]) s += a * v[r];
    return s;
  }

  // ftran over a vector known to be zero outside `touched`; new support rows
  // get appended, and the list comes back sorted and deduplicated so every
  // later walk over it is deterministic.
  void ftran_sparse(std::vector<double>& v, std::vector<int>& touched) const {
    for (const Eta& e : etas_) {
      double t = v[e.row];
      if (t == 0.0) continue;
      t /= e.pivot;
      for (auto [i, a] : e.col) {
        if (v[i] == 0.0) touched.push_back(i);
        v[i] -= a * t;
      }
      v[e.row] = t;
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  }

  // w <- B^{-1} a_j. The caller reuses w and its support list across calls;
  // entries outside `touched` must already be zero.
  void transform_col(int j, std::vector<double>& w, std::vector<int>& touched) const {
    for (int i : touched) w[i] = 0.0;
    touched.clear();
    for (auto [r, a] : cols_[j]) {
      w[r] = a;
      touched.push_back(r);
    }
    ftran_sparse(w, touched);
  }

  void push_eta(int row, const std::vector<double>& d, const std::vector<int>& touched) {
    Eta e;
    e.row = row;
    e.pivot = d[row];
    for (int i : touched) {
      if (i != row && d[i] != 0.0) e.col.push_back({i, d[i]});
    }
    if (e.pivot == 1.0 && e.col.empty()) return;  // identity factor
    etas_.push_back(std::move(e));
  }

  // Rebuilds the eta chain from the kBasic set, re-assigning pivot rows.
  //
  // A two-sided peel first permutes the basis toward triangular form:
  //  - rows touched by exactly one remaining column pivot that pair to the
  //    front. Such a column can have no entry in any earlier front row (it
  //    would have kept that row from being a singleton), so its eta is the
  //    raw column and picks up no fill;
  //  - columns with exactly one remaining row (notably basic slacks) are
  //    reserved to the back, and dropping their rows from play lets more of
  //    both kinds cascade.
  // What survives is a small coupled bump, eliminated in the middle of the
  // chain by general pivoting on the largest transformed entry. Back columns
  // then build in reverse discovery order: each is one cheap transform, and
  // none can touch a back row reserved after it. A member with no usable
  // pivot row anywhere is kicked back to a bound; rows left without a basic
  // column get one seated from the nonbasic pool (own slack first).
  void refactorize() {
    ++refactors_total_;
    etas_.clear();
    basic_.assign(m_, -1);
    std::vector<int> members;
    members.reserve(m_);
    for (int j = 0; j < n_ + m_; ++j) {
      if (vstat_[j] == kBasic) members.push_back(j);
    }

    std::vector<char> row_taken(m_, 0);
    std::vector<char> eliminated(n_ + m_, 0);
    std::vector<std::pair<int, int>> front, back;  // (column, row), discovery order
    std::vector<int> bump;
    {
      std::vector<std::vector<int>> row_members(m_);
      std::vector<int> live_rows(m_, 0);
      std::vector<int> live_cols(n_ + m_, 0);
      for (int j : members) {
        for (auto [r, a] : cols_[j]) {
          row_members[r].push_back(j);
          ++live_rows[r];
          ++live_cols[j];
        }
      }
      std::vector<int> fq, bq;
      for (int r = 0; r < m_; ++r) {
        if (live_rows[r] == 1) fq.push_back(r);
      }
      for (int j : members) {
        if (live_cols[j] == 1) bq.push_back(j);
      }
      auto settle = [&](int j, int r) {
        eliminated[j] = 1;
        row_taken[r] = 1;
        for (auto [i, a] : cols_[j]) {
          if (!row_taken[i] && --live_rows[i] == 1) fq.push_back(i);
        }
        for (int c : row_members[r]) {
          if (!eliminated[c] && --live_cols[c] == 1) bq.push_back(c);
        }
      };
      while (!fq.empty() || !bq.empty()) {
        if (!fq.empty()) {
          int r = fq.back();
          fq.pop_back();
          if (row_taken[r] || live_rows[r] != 1) continue;
          int j = -1;
          for (int cand : row_members[r]) {
            if (!eliminated[cand]) {
              j = cand;
              break;
            }
          }
          if (j < 0) continue;
          double pivot = 0;
          for (auto [i, a] : cols_[j]) {
            if (i == r) pivot = a;
          }
          if (std::abs(pivot) <= kPivotTol) continue;  // leave it to the bump
          front.push_back({j, r});
          settle(j, r);
        } else {
          int j = bq.back();
          bq.pop_back();
          if (eliminated[j] || live_cols[j] != 1) continue;
          int r = -1;
          for (auto [i, a] : cols_[j]) {
            if (!row_taken[i]) {
              r = i;
              break;
            }
          }
          if (r < 0) continue;
          back.push_back({j, r});
          settle(j, r);
        }
      }
      for (int j : members) {
        if (!eliminated[j]) bump.push_back(j);
      }
    }

    for (auto [j, r] : front) {
      Eta e;
      e.row = r;
      e.pivot = 0;
      for (auto [i, a] : cols_[j]) {
        if (i == r) {
          e.pivot = a;
        } else {
          e.col.push_back({i, a});
        }
      }
      if (!(e.pivot == 1.0 && e.col.empty())) etas_.push_back(std::move(e));
      basic_[r] = j;
    }

    std::sort(bump.begin(), bump.end(), [&](int a, int b) {
      if (cols_[a].size() != cols_[b].size()) return cols_[a].size() < cols_[b].size();
      return a < b;
    });
    std::vector<double> work(m_, 0.0);
    std::vector<int> touched;
    for (int j : bump) {
      transform_col(j, work, touched);
      int best = -1;
      double best_mag = kPivotTol;
      for (int i : touched) {
        if (row_taken[i]) continue;
        double mag = std::abs(work[i]);
        if (mag > best_mag) {
          best_mag = mag;
          best = i;
        }
      }
      if (best < 0) {
        vstat_[j] = to_bound_state(j);  // dependent column, drop it
        continue;
      }
      push_eta(best, work, touched);
      row_taken[best] = 1;
      basic_[best] = j;
      ++fallback_total_;
    }
    for (auto it = back.rbegin(); it != back.rend(); ++it) {
      auto [j, r] = *it;
      transform_col(j, work, touched);
      int seat = std::abs(work[r]) > kPivotTol ? r : -1;
      if (seat < 0) {
        // Cancellation at the reserved row: any never-taken row still works,
        // and the reserved row falls through to the repair pass.
        double best_mag = kPivotTol;
        for (int i : touched) {
          if (row_taken[i]) continue;
          double mag = std::abs(work[i]);
          if (mag > best_mag) {
            best_mag = mag;
            seat = i;
          }
        }
      }
      if (seat < 0) {
        vstat_[j] = to_bound_state(j);
        continue;
      }
      push_eta(seat, work, touched);
      row_taken[seat] = 1;
      basic_[seat] = j;
    }
    for (int r = 0; r < m_; ++r) {
      if (basic_[r] >= 0) continue;
      auto try_seat = [&](int j) {
        if (vstat_[j] == kBasic) return false;
        transform_col(j, work, touched);
        if (std::abs(work[r]) <= kPivotTol) return false;
        push_eta(r, work, touched);
        basic_[r] = j;
        vstat_[j] = kBasic;
        return true;
      };
      if (try_seat(n_ + r)) continue;
      bool seated = false;
      for (int j = n_; j < n_ + m_ && !seated; ++j) seated = try_seat(j);
      for (int j = 0; j < n_ && !seated; ++j) seated = try_seat(j);
      if (!seated) throw ContractViolation("singular basis could not be repaired");
    }
    needs_refactor_ = false;
    pivots_since_refactor_ = 0;
  }

  signed char to_bound_state(int j) const {
    if (lo_[j] > -kInf) return kAtLower;
    if (up_[j] < kInf) return kAtUpper;
    return kAtLower;  // free column parks at zero
  }

  double bound_value(int j) const {
    if (vstat_[j] == kAtUpper) return up_[j] < kInf ? up_[j] : 0.0;
    return lo_[j] > -kInf ? lo_[j] : 0.0;
  }

  void compute_x() {
    x_.assign(n_ + m_, 0.0);
    std::vector<double> v(rhs_);
    for (int j = 0; j < n_ + m_; ++j) {
      if (vstat_[j] == kBasic) continue;
      double val = bound_value(j);
      x_[j] = val;
      if (val != 0.0) {
        for (auto [r, a] : cols_[j]) v[r] -= a * val;
      }
    }
    ftran(v);
    for (int r = 0; r < m_; ++r) x_[basic_[r]] = v[r];
  }

  // ---- feasibility probes ----

  std::pair<int, double> worst_violation() const {
    int row = -1;
    double worst = 0;
    for (int r = 0; r < m_; ++r) {
      int j = basic_[r];
      double gap = 0;
      if (x_[j] < lo_[j]) gap = lo_[j] - x_[j];
      if (x_[j] > up_[j]) gap = x_[j] - up_[j];
      if (gap > worst) {
        worst = gap;
        row = r;
      }
    }
    return {row, worst};
  }

  std::vector<double> dual_values() const {
    std::vector<double> y(m_);
    for (int r = 0; r < m_; ++r) y[r] = obj_[basic_[r]];
    btran(y);
    return y;
  }

  bool dual_feasible() const {
    std::vector<double> y = dual_values();
    for (int j = 0; j < n_ + m_; ++j) {
      if (vstat_[j] == kBasic || lo_[j] == up_[j]) continue;
      double d = obj_[j] - dot_col(j, y);
      if (vstat_[j] == kAtLower && d > kOptTol * 10) return false;
      if (vstat_[j] == kAtUpper && d < -kOptTol * 10) return false;
    }
    return true;
  }

  // Restores dual feasibility without pivots by parking each nonbasic column
  // whose reduced cost points the profitable way on its other bound. Typical
  // trigger: a branching fix was undone and the cost drifted while the column
  // sat fixed. Fails (flipping nothing) if any offender has no finite far
  // bound; the caller then falls back to primal phase 1.
  bool flip_to_dual_feasible() {
    std::vector<double> y = dual_values();
    std::vector<int> flips;
    for (int j = 0; j < n_ + m_; ++j) {
      if (vstat_[j] == kBasic || lo_[j] == up_[j]) continue;
      double d = obj_[j] - dot_col(j, y);
      if (vstat_[j] == kAtLower && d > kOptTol * 10) {
        if (up_[j] >= kInf) return false;
        flips.push_back(j);
      } else if (vstat_[j] == kAtUpper && d < -kOptTol * 10) {
        if (lo_[j] <= -kInf) return false;
        flips.push_back(j);
      }
    }
    for (int j : flips) {
      vstat_[j] = vstat_[j] == kAtLower ? kAtUpper : kAtLower;
    }
    if (!flips.empty()) compute_x();
    return true;
  }

  // ---- the simplex loops ----

  LpStatus run() {
    if (vstat_.empty()) crash_basis();
    if (needs_refactor_ || static_cast<int>(basic_.size()) != m_) refactorize();
    compute_x();
    total_pivots_ = 0;
    stall_streak_ = 0;
    if (worst_violation().second > kFeasTol) {
      if (dual_feasible() || flip_to_dual_feasible()) {
        // Most columns carry a zero objective, so dual pivots would be almost
        // all degenerate and the walk can wander. Tiny status-aware cost
        // noise makes every ratio strictly positive, giving each pivot real
        // dual progress; the true costs come back before the final cleanup.
        std::vector<double> saved = obj_;
        perturb_costs();
        LpStatus st = dual_simplex();
        obj_ = std::move(saved);
        if (st != LpStatus::kOptimal) return st;
      } else {
        LpStatus st = primal_simplex(/*phase1=*/true);
        if (st != LpStatus::kOptimal) return st;
        if (worst_violation().second > kFeasTol) return LpStatus::kInfeasible;
      }
    }
    return primal_simplex(/*phase1=*/false);
  }

  // Shifts each nonbasic cost a hair further into dual feasibility, by an
  // amount that differs per column (index-hashed) so ties break everywhere.
  // Deterministic, so identical runs stay identical.
  void perturb_costs() {
    for (int j = 0; j < n_ + m_; ++j) {
      if (vstat_[j] == kBasic || lo_[j] == up_[j]) continue;
      std::uint32_t h = static_cast<std::uint32_t>(j) * 2654435761u;
      double e = kPerturb * (1.0 + (h & 1023) / 1024.0) * (1.0 + std::abs(obj_[j]));
      obj_[j] += vstat_[j] == kAtUpper ? e : -e;
    }
  }

  // Nonbasics parked where the objective sign wants them, so the all-slack
  // start is usually dual feasible and cold solves run on the dual simplex.
  void crash_basis() {
    vstat_.assign(n_ + m_, kAtLower);
    for (int j = 0; j < n_; ++j) {
      if (obj_[j] > 0 && up_[j] < kInf) {
        vstat_[j] = kAtUpper;
      } else {
        vstat_[j] = to_bound_state(j);
      }
    }
    for (int r = 0; r < m_; ++r) vstat_[n_ + r] = kBasic;
    needs_refactor_ = true;
  }

  bool maybe_refactor() {
    if (++pivots_since_refactor_ >= kRefactorEvery) {
      refactorize();
      compute_x();
      return true;
    }
    return false;
  }

  // Reduced costs for every nonbasic column, recomputed from the duals. The
  // dual simplex keeps this cache current across pivots and only falls back
  // here after a refactorization, which also caps drift.
  void sync_reduced() {
    std::vector<double> y = dual_values();
    d_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_ + m_; ++j) {
      if (vstat_[j] == kBasic) continue;
      d_[j] = obj_[j] - dot_col(j, y);
    }
  }

  void note_progress(double delta) {
    if (std::abs(delta) > 1e-12) {
      stall_streak_ = 0;
    } else {
      ++stall_streak_;
    }
  }
  bool bland() const { return stall_streak_ >= kBlandStreak; }

  // Drives every basic variable back inside its bounds while keeping reduced
  // costs sign-correct. No admissible entering column at a violated row
  // proves the primal infeasible.
  //
  // Bound-flipping ratio test: candidates are walked in increasing
  // |reduced cost| / |alpha|. A boxed candidate whose full range cannot
  // absorb the remaining violation is flipped to its other bound instead of
  // entering, which keeps every reduced-cost sign intact and lets one pivot
  // retire far more infeasibility. The first candidate that can absorb the
  // rest enters, so the entering value always lands inside its own bounds.
  LpStatus dual_simplex() {
    std::vector<double> rho(m_), w(m_), u(m_);
    std::vector<int> wt, ut;
    std::vector<double> alpha(n_ + m_, 0.0);
    std::vector<int> at;
    sync_reduced();
    // Devex row weights: cheap running estimates of ||B^{-T}e_r||^2, so the
    // leaving row is picked by how far the point really is from feasible in
    // the dual metric, not by raw bound violation. Far fewer pivots on
    // degenerate models, and the update reuses the pivot column as is.
    std::vector<double> devex(m_, 1.0);
    struct Cand {
      int j;
      double ratio, alph;
    };
    std::vector<Cand> cands;
    while (true) {
      if (++total_pivots_ > kMaxPivots) return LpStatus::kNumericalFailure;
      int r = -1;
      double best_score = 0;
      for (int i = 0; i < m_; ++i) {
        int j = basic_[i];
        double gap = 0;
        if (x_[j] < lo_[j]) gap = lo_[j] - x_[j];
        if (x_[j] > up_[j]) gap = x_[j] - up_[j];
        if (gap <= kFeasTol) continue;
        double score = gap * gap / devex[i];
        if (score > best_score) {
          best_score = score;
          r = i;
        }
      }
      if (r < 0) return LpStatus::kOptimal;
      int leave = basic_[r];
      bool above = x_[leave] > up_[leave];

      std::fill(rho.begin(), rho.end(), 0.0);
      rho[r] = 1.0;
      btran(rho);

      // Pivot row alpha = rho^T A, built row-wise from rho's support so the
      // candidate scan only ever sees columns that actually intersect it.
      for (int j : at) alpha[j] = 0.0;
      at.clear();
      for (int i = 0; i < m_; ++i) {
        double p = rho[i];
        if (p == 0.0) continue;
        if (alpha[n_ + i] == 0.0) at.push_back(n_ + i);
        alpha[n_ + i] += p;  // the slack of row i
        for (auto [j, a] : rows_[i]) {
          if (alpha[j] == 0.0) at.push_back(j);
          alpha[j] += p * a;
        }
      }
      std::sort(at.begin(), at.end());
      at.erase(std::unique(at.begin(), at.end()), at.end());

      cands.clear();
      for (int j : at) {
        if (vstat_[j] == kBasic || lo_[j] == up_[j]) continue;
        double a = alpha[j];
        if (std::abs(a) <= kPivotTol) continue;
        bool ok = above ? (vstat_[j] == kAtLower ? a > 0 : a < 0)
                        : (vstat_[j] == kAtLower ? a < 0 : a > 0);
        if (!ok) continue;
        cands.push_back({j, std::abs(d_[j]) / std::abs(a), a});
      }
      if (cands.empty()) return LpStatus::kInfeasible;
      if (bland()) {
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
          return a.j < b.j;
        });
      } else {
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
          if (a.ratio != b.ratio) return a.ratio < b.ratio;
          if (std::abs(a.alph) != std::abs(b.alph))
            return std::abs(a.alph) > std::abs(b.alph);
          return a.j < b.j;
        });
      }

      double target = above ? up_[leave] : lo_[leave];
      double remaining = x_[leave] - target;
      int enter = -1;
      for (const Cand& c : cands) {
        double range = up_[c.j] - lo_[c.j];
        if (range < kInf && std::abs(c.alph) * range < std::abs(remaining)) {
          // Flip: the whole range gets used up and the candidate stays
          // nonbasic at its other bound.
          double step = vstat_[c.j] == kAtLower ? range : -range;
          for (auto [i, a] : cols_[c.j]) {
            if (u[i] == 0.0) ut.push_back(i);
            u[i] += a * step;
          }
          x_[c.j] += step;
          vstat_[c.j] = vstat_[c.j] == kAtLower ? kAtUpper : kAtLower;
          remaining -= c.alph * step;
        } else {
          enter = c.j;
          break;
        }
      }
      if (!ut.empty()) {
        ftran_sparse(u, ut);
        for (int i : ut) {
          if (u[i] != 0.0) x_[basic_[i]] -= u[i];
        }
        for (int i : ut) u[i] = 0.0;
        ut.clear();
      }
      if (enter < 0) {
        // Flips can absorb the violation to within rounding when the last
        // candidate's whole range matched the residual; that is feasibility,
        // not an infeasibility certificate.
        if (std::abs(remaining) <= kFeasTol) continue;
        return LpStatus::kInfeasible;
      }

      transform_col(enter, w, wt);
      if (std::abs(w[r]) <= kPivotTol) {
        refactorize();  // alpha disagreed with the FTRAN'd column: stale chain
        compute_x();
        sync_reduced();
        devex.assign(m_, 1.0);
        continue;
      }
      double gamma = d_[enter] / alpha[enter];
      double delta = (x_[leave] - target) / w[r];
      double before = objective();
      double dr = devex[r], wr = w[r];
      for (int i : wt) {
        if (i == r || w[i] == 0.0) continue;
        double est = (w[i] / wr) * (w[i] / wr) * dr;
        if (est > devex[i]) devex[i] = est;
      }
      devex[r] = std::max(dr / (wr * wr), 1.0);
      apply_pivot(r, enter, w, wt, delta, above ? kAtUpper : kAtLower, target);
      for (int j : at) {
        if (alpha[j] != 0.0) d_[j] -= gamma * alpha[j];
      }
      d_[enter] = 0.0;
      d_[leave] = -gamma;
      note_progress(objective() - before);
      if (maybe_refactor()) {
        sync_reduced();
        devex.assign(m_, 1.0);
      }
    }
  }

  // phase1: minimizes total bound violation of basic variables, letting an
  // out-of-bounds variable ride exactly up to the bound it violates.
  // phase2: plain bounded-variable primal steps on the true objective.
  LpStatus primal_simplex(bool phase1) {
    std::vector<double> price(m_), d(m_);
    std::vector<int> dt;
    while (true) {
      if (++total_pivots_ > kMaxPivots) return LpStatus::kNumericalFailure;

      double infeas = 0;
      std::fill(price.begin(), price.end(), 0.0);
      if (phase1) {
        for (int r = 0; r < m_; ++r) {
          int j = basic_[r];
          if (x_[j] < lo_[j] - kFeasTol) {
            price[r] = 1.0;
            infeas += lo_[j] - x_[j];
          } else if (x_[j] > up_[j] + kFeasTol) {
            price[r] = -1.0;
            infeas += x_[j] - up_[j];
          }
        }
        if (infeas <= kFeasTol) return LpStatus::kOptimal;
      } else {
        for (int r = 0; r < m_; ++r) price[r] = obj_[basic_[r]];
      }
      btran(price);

      // Entering column: best improvement rate, Dantzig style; first
      // admissible index once Bland's rule is on.
      int enter = -1, dir = 0;
      double best = kOptTol;
      for (int j = 0; j < n_ + m_; ++j) {
        if (vstat_[j] == kBasic || lo_[j] == up_[j]) continue;
        // Objective change per unit increase of x_j.
        double g = phase1 ? -dot_col(j, price) : obj_[j] - dot_col(j, price);
        int want = 0;
        double score = 0;
        if (vstat_[j] == kAtLower && g > kOptTol) {
          want = +1;
          score = g;
        } else if (vstat_[j] == kAtUpper && -g > kOptTol) {
          want = -1;
          score = -g;
        } else {
          continue;
        }
        if (bland()) {
          enter = j;
          dir = want;
          break;
        }
        if (score > best) {
          best = score;
          enter = j;
          dir = want;
        }
      }
      if (enter < 0) {
        // No improving column. Phase 1 leaves any remaining violation to the
        // caller, which reports infeasibility.
        return LpStatus::kOptimal;
      }

      transform_col(enter, d, dt);

      // Ratio test. Feasible basics block at the bound they would leave;
      // phase-1 violated basics block at the bound they are violating.
      double min_room = kInf;
      int block_row = -1;
      signed char block_state = kAtLower;
      double block_mag = 0;
      for (int r : dt) {
        if (d[r] == 0.0) continue;
        double rate = -dir * d[r];  // d(x_basic[r]) per unit step of x_enter
        if (std::abs(rate) <= kPivotTol) continue;
        int j = basic_[r];
        double room;
        signed char state;
        if (rate > 0) {
          if (phase1 && x_[j] < lo_[j] - kFeasTol) {
            room = (lo_[j] - x_[j]) / rate;  // rides up exactly to feasibility
            state = kAtLower;
          } else if (phase1 && x_[j] > up_[j] + kFeasTol) {
            continue;  // drifting further above: the gradient already pays
          } else if (up_[j] < kInf) {
            room = (up_[j] - x_[j]) / rate;
            state = kAtUpper;
          } else {
            continue;
          }
        } else {
          if (phase1 && x_[j] > up_[j] + kFeasTol) {
            room = (x_[j] - up_[j]) / -rate;
            state = kAtUpper;
          } else if (phase1 && x_[j] < lo_[j] - kFeasTol) {
            continue;  // drifting further below
          } else if (lo_[j] > -kInf) {
            room = (x_[j] - lo_[j]) / -rate;
            state = kAtLower;
          } else {
            continue;
          }
        }
        if (room < 0) room = 0;
        bool take = false;
        if (room < min_room - 1e-12) {
          take = true;
        } else if (room < min_room + 1e-12 && block_row >= 0) {
          take = bland() ? basic_[r] < basic_[block_row]
                         : std::abs(rate) > block_mag;
        }
        if (take) {
          min_room = std::min(min_room, room);
          block_row = r;
          block_state = state;
          block_mag = std::abs(rate);
        }
      }

      double flip = up_[enter] - lo_[enter];
      double before = phase1 ? -infeas : objective();
      if (flip <= min_room + 1e-12) {
        if (flip == kInf) {
          // Nothing blocks in either sense.
          return phase1 ? LpStatus::kNumericalFailure : LpStatus::kUnbounded;
        }
        double step = dir * flip;
        for (int r : dt) x_[basic_[r]] -= d[r] * step;
        x_[enter] = vstat_[enter] == kAtLower ? up_[enter] : lo_[enter];
        vstat_[enter] = dir > 0 ? kAtUpper : kAtLower;
      } else {
        int j = basic_[block_row];
        double target = block_state == kAtUpper ? up_[j] : lo_[j];
        apply_pivot(block_row, enter, d, dt, dir * min_room, block_state, target);
        maybe_refactor();
      }
      if (phase1) {
        double after = 0;
        for (int r = 0; r < m_; ++r) {
          int j = basic_[r];
          if (x_[j] < lo_[j] - kFeasTol) after += lo_[j] - x_[j];
          if (x_[j] > up_[j] + kFeasTol) after += x_[j] - up_[j];
        }
        note_progress(-after - before);
      } else {
        note_progress(objective() - before);
      }
    }
  }

  // Moves the entering column by `delta`, seats it in row r, and parks the
  // leaving column at `target` with status `leave_state`.
  void apply_pivot(int r, int enter, const std::vector<double>& d,
                   const std::vector<int>& touched, double delta,
                   signed char leave_state, double target) {
    int leave = basic_[r];
    for (int i : touched) x_[basic_[i]] -= d[i] * delta;
    x_[enter] += delta;
    x_[leave] = target;  // exact, kills accumulated drift
    vstat_[enter] = kBasic;
    vstat_[leave] = leave_state;
    basic_[r] = enter;
    push_eta(r, d, touched);
    ++pivots_total_;
  }

  static constexpr long long kMaxPivots = 2000000;

  int n_ = 0, m_ = 0;
  std::vector<double> obj_, lo_, up_, rhs_, x_, d_;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // structural + slack
  std::vector<std::vector<std::pair<int, double>>> rows_;  // structural terms
  std::vector<signed char> vstat_;
  std::vector<int> basic_;
  std::vector<Eta> etas_;
  bool needs_refactor_ = true;
  int pivots_since_refactor_ = 0;
  long long total_pivots_ = 0;
  long long pivots_total_ = 0;
  long long refactors_total_ = 0;
  long long fallback_total_ = 0;
  int stall_streak_ = 0;
  LpStatus status_ = LpStatus::kNumericalFailure;
};

inline LpSolution solve(const LinearProgram& lp) {
  LpSolver solver(lp);
  LpSolution out;
  out.status = solver.solve();
  if (out.status == LpStatus::kOptimal) {
    out.objective = solver.objective();
    out.primal = solver.primal();
    out.basis = solver.basis();
  }
  return out;
}

// Appends rows and re-solves, warm-starting from the prior basis.
inline LpSolution add_rows_resolve(LinearProgram& lp, const LpSolution& prior,
                                   const std::vector<LpRow>& rows) {
  LpSolver solver(lp);
  solver.set_basis(prior.basis);
  for (const LpRow& row : rows) {
    solver.add_row(row);
    lp.rows.push_back(row);
  }
  LpSolution out;
  out.status = solver.solve();
  if (out.status == LpStatus::kOptimal) {
    out.objective = solver.objective();
    out.primal = solver.primal();
    out.basis = solver.basis();
  }
  return out;
}

}  // namespace flowsched
