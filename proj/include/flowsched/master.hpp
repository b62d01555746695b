#pragma once
// The scheduling master problem and its branch-and-bound driver.
//
// The master keeps one flow estimate theta_t per period, arc-open binaries
// y_at, and job-start binaries Start_rt, tied together by:
//   MP2: each job starts exactly once inside its window;
//   MP3: y_at + (starts that keep the job running at t) = 1, which both links
//        y to the schedule and forbids same-arc overlap;
//   cut rows: theta_t <= sum Cap_a y_at over a discovered cut-set.
// theta's upper bound is the all-open flow, so the relaxation is bounded even
// with an empty cut pool. Periods no job can touch are folded out: their y is
// constant 1 and enters cut rows as right-hand-side constant.
//
// Modes stack features: kDbd is plain lazy-cut branch and bound, kPrecuts
// installs the bottleneck-lifting rows up front, kMain adds the repaired
// heuristic incumbent inside the callback, kLpr additionally grows the cut
// pool on the fractional relaxation before the tree search starts.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowsched/benders.hpp"
#include "flowsched/flow_cache.hpp"
#include "flowsched/instance.hpp"
#include "flowsched/lp.hpp"

namespace flowsched {

enum class Mode { kDbd, kPrecuts, kMain, kLpr };

inline std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::kDbd: return "dbd";
    case Mode::kPrecuts: return "precuts";
    case Mode::kMain: return "main";
    case Mode::kLpr: return "lpr";
  }
  return "?";
}

inline Mode mode_from_name(const std::string& name) {
  if (name == "dbd") return Mode::kDbd;
  if (name == "precuts") return Mode::kPrecuts;
  if (name == "main") return Mode::kMain;
  if (name == "lpr") return Mode::kLpr;
  throw ValidationError("unknown mode: " + name + " (expected dbd|precuts|main|lpr)");
}

struct SolverConfig {
  Mode mode = Mode::kMain;
  double time_limit = 300.0;  // seconds of wall time
  double abs_gap = 0.999;     // integral objectives make < 1 exact
  int lpr_max_iters = 50;     // relaxation rounds before the tree search
  bool branch_y_first = true;
};

struct SolveReport {
  std::string mode;
  Cap objective = 0;  // incumbent
  double best_bound = 0;
  double abs_gap = 0;
  double rel_gap = 0;
  long long nodes = 0;
  long long lazy_cuts = 0;
  long long flows_solved = 0;
  long long flows_recalled = 0;
  int lp_passes = 0;
  double wall_time_s = 0;
};

inline nlohmann::json report_to_json(const SolveReport& r) {
  return {{"mode", r.mode},
          {"objective", r.objective},
          {"best_bound", r.best_bound},
          {"abs_gap", r.abs_gap},
          {"rel_gap", r.rel_gap},
          {"nodes", r.nodes},
          {"lazy_cuts", r.lazy_cuts},
          {"flows_solved", r.flows_solved},
          {"flows_recalled", r.flows_recalled},
          {"lp_passes", r.lp_passes},
          {"wall_time_s", r.wall_time_s}};
}

inline SolveReport report_from_json(const nlohmann::json& j) {
  SolveReport r;
  try {
    r.mode = j.at("mode").get<std::string>();
    r.objective = j.at("objective").get<Cap>();
    r.best_bound = j.at("best_bound").get<double>();
    r.abs_gap = j.at("abs_gap").get<double>();
    r.rel_gap = j.at("rel_gap").get<double>();
    r.nodes = j.at("nodes").get<long long>();
    r.lazy_cuts = j.at("lazy_cuts").get<long long>();
    r.flows_solved = j.at("flows_solved").get<long long>();
    r.flows_recalled = j.at("flows_recalled").get<long long>();
    r.lp_passes = j.at("lp_passes").get<int>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return r;
}

inline std::string format_report_table(const SolveReport& r) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line), "%-8s %12s %12s %7s %8s %10s %13s %15s %10s %9s\n",
                "mode", "objective", "bound", "gap %", "nodes", "lazy gen.",
                "flow solved", "flow recalled", "LP solves", "time s");
  out += line;
  std::snprintf(line, sizeof(line),
                "%-8s %12lld %12.1f %7.3f %8lld %10lld %13lld %15lld %10d %9.2f\n",
                r.mode.c_str(), static_cast<long long>(r.objective), r.best_bound,
                r.rel_gap * 100.0, r.nodes, r.lazy_cuts, r.flows_solved,
                r.flows_recalled, r.lp_passes, r.wall_time_s);
  out += line;
  return out;
}

// ---------------------------------------------------------------------------

struct MasterModel {
  LinearProgram lp;
  Mode mode = Mode::kDbd;
  int horizon = 0;
  Cap all_open_flow = 0;
  std::vector<int> theta_col;                            // per period
  std::vector<int> y_col;                                // arc*horizon + t, -1 = folded
  std::vector<int> y_list;                               // created y columns, index order
  std::vector<std::vector<std::pair<int, int>>> starts;  // per request: (t, column)
  std::vector<int> start_list;

  int y_at(ArcId a, int t) const { return y_col[a * horizon + t]; }
};

// Rewrites a cut as a master row for period t: folded arcs (y identically 1)
// move their capacity into the right-hand side. Returns nothing when no
// master variable remains; such a row could never bind because a full cut-set
// has capacity >= the all-open flow, which already bounds theta.
inline std::optional<LpRow> master_cut_row(const MasterModel& model, const BendersCut& cut,
                                           int t) {
  LpRow row;
  row.rel = Relation::kLe;
  row.terms.push_back({model.theta_col[t], 1.0});
  double rhs = 0;
  for (const CutTerm& term : cut.terms) {
    int col = model.y_at(term.arc, t);
    if (col >= 0) {
      row.terms.push_back({col, -static_cast<double>(term.coeff)});
    } else {
      rhs += static_cast<double>(term.coeff);
    }
  }
  if (row.terms.size() == 1) return std::nullopt;
  row.rhs = rhs;
  return row;
}

inline MasterModel build_master(const Instance& inst, Mode mode, FlowCache& cache) {
  validate_instance(inst);
  const Network& net = inst.network;
  const int T = inst.horizon;
  const int n = net.arc_count();

  MasterModel model;
  model.mode = mode;
  model.horizon = T;
  model.all_open_flow = cache.solve_or_recall(net, ArcConfig::all_open(n)).value;

  for (int t = 0; t < T; ++t) {
    model.theta_col.push_back(
        model.lp.add_column(0.0, static_cast<double>(model.all_open_flow), 1.0));
  }

  // Which starts keep which (arc, period) cell busy. Key = arc*T + t; the
  // ordered map doubles as the covered-cell set in (arc, t) order.
  std::map<int, std::vector<std::pair<int, int>>> busy;  // cell -> (request, start)
  for (std::size_t ri = 0; ri < inst.requests.size(); ++ri) {
    const MaintenanceRequest& r = inst.requests[ri];
    for (int s = r.release; s <= r.latest_start(); ++s) {
      for (int t = s; t < s + r.duration && t < T; ++t) {
        busy[r.arc * T + t].push_back({static_cast<int>(ri), s});
      }
    }
  }

  model.y_col.assign(n * T, -1);
  for (const auto& [cell, terms] : busy) {
    int col = model.lp.add_column(0.0, 1.0, 0.0);
    model.y_col[cell] = col;
    model.y_list.push_back(col);
  }

  model.starts.resize(inst.requests.size());
  std::vector<std::map<int, int>> start_at(inst.requests.size());  // start time -> col
  for (std::size_t ri = 0; ri < inst.requests.size(); ++ri) {
    const MaintenanceRequest& r = inst.requests[ri];
    for (int s = r.release; s <= r.latest_start(); ++s) {
      int col = model.lp.add_column(0.0, 1.0, 0.0);
      model.starts[ri].push_back({s, col});
      model.start_list.push_back(col);
      start_at[ri][s] = col;
    }
  }

  // MP2: every job starts exactly once.
  for (std::size_t ri = 0; ri < inst.requests.size(); ++ri) {
    LpRow row;
    row.rel = Relation::kEq;
    row.rhs = 1.0;
    for (auto [s, col] : model.starts[ri]) row.terms.push_back({col, 1.0});
    model.lp.rows.push_back(std::move(row));
  }

  // MP3: the arc is open unless exactly one covering job is running.
  for (const auto& [cell, terms] : busy) {
    LpRow row;
    row.rel = Relation::kEq;
    row.rhs = 1.0;
    row.terms.push_back({model.y_col[cell], 1.0});
    for (auto [ri, s] : terms) row.terms.push_back({start_at[ri][s], 1.0});
    model.lp.rows.push_back(std::move(row));
  }

  if (mode != Mode::kDbd) {
    for (const BendersCut& cut : pre_cuts(net)) {
      for (int t = 0; t < T; ++t) {
        if (auto row = master_cut_row(model, cut, t)) {
          model.lp.rows.push_back(std::move(*row));
        }
      }
    }
  }
  return model;
}

inline MasterModel build_master(const Instance& inst, Mode mode) {
  FlowCache cache;
  return build_master(inst, mode, cache);
}

// Deadline-ordered packing per arc; always feasible on a validated instance.
inline Schedule edf_schedule(const Instance& inst) {
  std::map<ArcId, std::vector<MaintenanceRequest>> by_arc;
  for (const MaintenanceRequest& r : inst.requests) by_arc[r.arc].push_back(r);
  Schedule sched;
  for (auto& [arc, reqs] : by_arc) {
    std::sort(reqs.begin(), reqs.end(), [](const auto& a, const auto& b) {
      if (a.deadline != b.deadline) return a.deadline < b.deadline;
      if (a.release != b.release) return a.release < b.release;
      return a.id < b.id;
    });
    int cursor = 0;
    for (const MaintenanceRequest& r : reqs) {
      int start = std::max(r.release, cursor);
      sched.start[r.id] = start;
      cursor = start + r.duration;
    }
  }
  return sched;
}

// ---------------------------------------------------------------------------

struct BruteForceResult {
  Cap objective = 0;
  Schedule schedule;
};

// Exhaustive optimum over all feasible start combinations. Refuses instances
// whose start-combination count exceeds `max_combinations`.
inline BruteForceResult brute_force(const Instance& inst,
                                    long long max_combinations = 1000000) {
  validate_instance(inst);
  double combos = 1;
  for (const MaintenanceRequest& r : inst.requests) {
    combos *= static_cast<double>(r.latest_start() - r.release + 1);
    if (combos > static_cast<double>(max_combinations)) {
      throw InstanceTooLarge("start combinations exceed " +
                             std::to_string(max_combinations));
    }
  }

  const Network& net = inst.network;
  const int T = inst.horizon;
  std::unordered_map<ArcConfig, Cap, ArcConfigHash> value_of;
  auto flow_value = [&](const ArcConfig& cfg) {
    auto it = value_of.find(cfg);
    if (it != value_of.end()) return it->second;
    Cap v = max_flow(net, cfg).value;
    value_of.emplace(cfg, v);
    return v;
  };

  const int R = static_cast<int>(inst.requests.size());
  std::vector<int> start(R, -1);
  BruteForceResult best;
  best.objective = -1;

  auto overlaps_chosen = [&](int idx, int s) {
    const MaintenanceRequest& r = inst.requests[idx];
    for (int k = 0; k < idx; ++k) {
      const MaintenanceRequest& o = inst.requests[k];
      if (o.arc != r.arc) continue;
      if (s <= start[k] + o.duration - 1 && start[k] <= s + r.duration - 1) return true;
    }
    return false;
  };

  auto evaluate = [&]() {
    Cap total = 0;
    for (int t = 0; t < T; ++t) {
      ArcConfig cfg = ArcConfig::all_open(net.arc_count());
      for (int k = 0; k < R; ++k) {
        if (inst.requests[k].running(start[k], t)) cfg.set(inst.requests[k].arc, false);
      }
      total += flow_value(cfg);
    }
    if (total > best.objective) {
      best.objective = total;
      best.schedule.start.clear();
      for (int k = 0; k < R; ++k) best.schedule.start[inst.requests[k].id] = start[k];
    }
  };

  auto recurse = [&](auto&& self, int idx) -> void {
    if (idx == R) {
      evaluate();
      return;
    }
    const MaintenanceRequest& r = inst.requests[idx];
    for (int s = r.release; s <= r.latest_start(); ++s) {
      if (overlaps_chosen(idx, s)) continue;
      start[idx] = s;
      self(self, idx + 1);
      start[idx] = -1;
    }
  };
  recurse(recurse, 0);
  return best;
}

// ---------------------------------------------------------------------------

struct SolveResult {
  Schedule schedule;
  SolveReport report;
};

// A lazy cut together with the configuration and flow value it came from.
struct EmittedCut {
  BendersCut cut;
  ArcConfig config;
  Cap flow_value = 0;
};

class MasterSolver {
 public:
  MasterSolver(const Instance& inst, const SolverConfig& cfg) : inst_(inst), cfg_(cfg) {
    detail::require(cfg.abs_gap > 0, "absolute gap must be positive");
    detail::require(cfg.time_limit > 0, "time limit must be positive");
    detail::require(cfg.lpr_max_iters > 0, "relaxation iteration cap must be positive");
    model_ = build_master(inst_, cfg_.mode, cache_);
  }

  const MasterModel& model() const { return model_; }
  const FlowCache& cache() const { return cache_; }
  const std::vector<EmittedCut>& emitted_cuts() const { return emitted_; }
  // Relaxation objective after each pass of the most recent warm start.
  const std::vector<double>& relaxation_trace() const { return lpr_trace_; }

  // Objective of the LP relaxation at the root, after the warm-start loop in
  // kLpr mode. Does not touch the tree search.
  double root_bound() {
    LpSolver solver(model_.lp);
    solver.set_basis(packed_crash_basis());
    if (cfg_.mode == Mode::kLpr) {
      warm_start(solver, Clock::now());
    }
    if (solver.solve() != LpStatus::kOptimal) {
      throw ContractViolation("root relaxation did not solve");
    }
    return solver.objective();
  }

  SolveResult run() {
    const auto t0 = Clock::now();
    LpSolver solver(model_.lp);
    solver.set_basis(packed_crash_basis());
    report_ = SolveReport{};
    report_.mode = mode_name(cfg_.mode);

    if (cfg_.mode == Mode::kLpr) report_.lp_passes = warm_start(solver, t0);

    // Feasible bootstrap: the solver always has a schedule to return, even
    // if the clock runs out before the first integer node.
    Schedule inc_sched = edf_schedule(inst_);
    Cap inc_obj = evaluate_with_cache(inc_sched);

    struct Fix {
      int col;
      double lo, up;
    };
    struct Node {
      double bound;
      long long id;
      std::vector<Fix> fixes;
    };
    auto worse = [](const Node& a, const Node& b) {
      if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
      return a.id > b.id;                                // then oldest first
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
    std::optional<Node> dive = Node{kInf, 0, {}};
    long long next_id = 1;
    std::vector<Fix> applied;
    bool out_of_time = false;

    auto seconds_left = [&] {
      return cfg_.time_limit - std::chrono::duration<double>(Clock::now() - t0).count();
    };
    auto enter = [&](const Node& node) {
      for (const Fix& f : applied) solver.set_bounds(f.col, 0.0, 1.0);
      applied = node.fixes;
      for (const Fix& f : applied) solver.set_bounds(f.col, f.lo, f.up);
    };

    while (true) {
      Node node{0, 0, {}};
      if (dive) {
        node = std::move(*dive);
        dive.reset();
      } else if (!open.empty() && open.top().bound >= inc_obj + cfg_.abs_gap) {
        node = open.top();
        open.pop();
      } else {
        break;  // every open node is within the gap of the incumbent
      }
      if (node.bound < inc_obj + cfg_.abs_gap) continue;
      if (seconds_left() <= 0) {
        open.push(std::move(node));  // still open; keeps the bound honest
        out_of_time = true;
        break;
      }

      ++report_.nodes;
      enter(node);
      double bound = node.bound;

      while (true) {  // re-solve loop: lazy cuts keep the node alive
        LpStatus st = solver.solve();
        if (st == LpStatus::kInfeasible) {
          bound = -kInf;
          break;
        }
        if (st != LpStatus::kOptimal) {
          // Numerical trouble: the parent bound still holds. Split on any
          // unfixed binary; with everything fixed, score the point directly
          // so no subtree is ever silently dropped.
          int col = first_unfixed(solver);
          if (col < 0) {
            Cap scored = 0;
            if (salvage_fixed_point(solver, scored) && scored > inc_obj) {
              inc_obj = scored;
              inc_sched = schedule_from_fixing(solver);
            }
            break;
          }
          Node down{bound, next_id++, node.fixes};
          down.fixes.push_back({col, 0.0, 0.0});
          Node up{bound, next_id++, node.fixes};
          up.fixes.push_back({col, 1.0, 1.0});
          dive = std::move(up);
          open.push(std::move(down));
          break;
        }
        bound = std::min(bound, solver.objective());
        if (bound < inc_obj + cfg_.abs_gap) break;

        int branch_col = pick_branch(solver);
        if (branch_col >= 0) {
          double v = solver.value(branch_col);
          Node down{bound, next_id++, node.fixes};
          down.fixes.push_back({branch_col, 0.0, 0.0});
          Node up{bound, next_id++, node.fixes};
          up.fixes.push_back({branch_col, 1.0, 1.0});
          if (v >= 0.5) {
            dive = std::move(up);
            open.push(std::move(down));
          } else {
            dive = std::move(down);
            open.push(std::move(up));
          }
          break;
        }

        // Integer point: price every period against the true flows.
        CallbackResult cb = callback(solver);
        bool accept = cb.cuts_added == 0 ||
                      cfg_.mode == Mode::kMain || cfg_.mode == Mode::kLpr;
        if (accept && cb.true_objective > inc_obj) {
          inc_obj = cb.true_objective;
          inc_sched = cb.schedule;
        }
        if (cb.cuts_added == 0) break;  // node fully priced
        report_.lazy_cuts += cb.cuts_added;
        if (seconds_left() <= 0) {
          open.push(Node{bound, next_id++, node.fixes});
          out_of_time = true;
          break;
        }
      }
      if (out_of_time) break;
    }

    double best_bound = static_cast<double>(inc_obj);
    if (out_of_time) {
      if (dive) best_bound = std::max(best_bound, dive->bound);
      if (!open.empty()) best_bound = std::max(best_bound, open.top().bound);
      if (best_bound == kInf) best_bound = trivial_bound();
    }
    report_.objective = inc_obj;
    report_.best_bound = best_bound;
    report_.abs_gap = best_bound - static_cast<double>(inc_obj);
    report_.rel_gap = report_.abs_gap / std::max(1.0, std::abs(best_bound));
    report_.flows_solved = cache_.solved_count();
    report_.flows_recalled = cache_.recalled_count();
    report_.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return {inc_sched, report_};
  }

 private:
  using Clock = std::chrono::steady_clock;

  struct CallbackResult {
    int cuts_added = 0;
    Cap true_objective = 0;
    Schedule schedule;
  };

  ArcConfig config_from_lp(const LpSolver& solver, int t) const {
    ArcConfig cfg = ArcConfig::all_open(inst_.network.arc_count());
    for (ArcId a = 1; a < inst_.network.arc_count(); ++a) {
      int col = model_.y_at(a, t);
      if (col >= 0 && solver.value(col) < 0.5) cfg.set(a, false);
    }
    return cfg;
  }

  // Starting basis built from the deadline-packed schedule: each start column
  // seats its one-start row, each arc-open column seats its cell row, cut
  // rows keep their slack. Permuted triangular, so refactorization peels it
  // without fill, the duals are all zero (dual feasible), and the only primal
  // infeasibilities are the cut rows the packed schedule violates.
  LpBasis packed_crash_basis() const {
    const int n = static_cast<int>(model_.lp.columns.size());
    const int m = static_cast<int>(model_.lp.rows.size());
    LpBasis b;
    b.vstat.assign(n + m, kAtLower);
    for (int col : model_.theta_col) b.vstat[col] = kAtUpper;
    for (int col : model_.y_list) b.vstat[col] = kBasic;
    Schedule packed = edf_schedule(inst_);
    for (std::size_t ri = 0; ri < inst_.requests.size(); ++ri) {
      int s = packed.start.at(inst_.requests[ri].id);
      for (auto [t, col] : model_.starts[ri]) {
        if (t == s) b.vstat[col] = kBasic;
      }
    }
    int first_cut_row = static_cast<int>(inst_.requests.size() + model_.y_list.size());
    for (int r = first_cut_row; r < m; ++r) b.vstat[n + r] = kBasic;
    return b;
  }

  Schedule schedule_from_fixing(const LpSolver& solver) const {
    Schedule sched;
    for (std::size_t ri = 0; ri < inst_.requests.size(); ++ri) {
      for (auto [s, col] : model_.starts[ri]) {
        if (solver.lower(col) > 0.5) {
          sched.start[inst_.requests[ri].id] = s;
          break;
        }
      }
    }
    return sched;
  }

  // Fully fixed node whose LP would not solve: read the schedule off the
  // fixed bounds and score it with true flows. Returns false when the fixing
  // itself is inconsistent (then the node is genuinely infeasible).
  bool salvage_fixed_point(const LpSolver& solver, Cap& objective) {
    Schedule sched = schedule_from_fixing(solver);
    try {
      validate_schedule(inst_, sched);
    } catch (const ValidationError&) {
      return false;
    }
    objective = evaluate_with_cache(sched);
    return true;
  }

  CallbackResult callback(LpSolver& solver) {
    CallbackResult out;
    for (int t = 0; t < model_.horizon; ++t) {
      ArcConfig cfg = config_from_lp(solver, t);
      const FlowSolution& flow = cache_.solve_or_recall(inst_.network, cfg);
      out.true_objective += flow.value;
      double theta = solver.value(model_.theta_col[t]);
      if (theta > static_cast<double>(flow.value) + 1e-6) {
        BendersCut cut = cut_from_duals(t, flow, inst_.network);
        auto row = master_cut_row(model_, cut, t);
        if (!row) {
          throw ContractViolation("violated cut lost all master variables");
        }
        solver.add_row(*row);
        emitted_.push_back({std::move(cut), cfg, flow.value});
        ++out.cuts_added;
      }
    }
    for (std::size_t ri = 0; ri < inst_.requests.size(); ++ri) {
      for (auto [s, col] : model_.starts[ri]) {
        if (solver.value(col) > 0.5) {
          out.schedule.start[inst_.requests[ri].id] = s;
          break;
        }
      }
    }
    return out;
  }

  // Most fractional first, smallest column index on ties; y takes priority
  // over Start unless configured off.
  int pick_branch(const LpSolver& solver) const {
    auto most_fractional = [&](const std::vector<int>& cols) {
      int best = -1;
      double best_dist = 1e-6;
      for (int col : cols) {
        double v = solver.value(col);
        double dist = std::min(v, 1.0 - v);
        if (dist > best_dist) {
          best_dist = dist;
          best = col;
        }
      }
      return best;
    };
    if (cfg_.branch_y_first) {
      int col = most_fractional(model_.y_list);
      if (col >= 0) return col;
      return most_fractional(model_.start_list);
    }
    std::vector<int> all = model_.y_list;
    all.insert(all.end(), model_.start_list.begin(), model_.start_list.end());
    return most_fractional(all);
  }

  int first_unfixed(const LpSolver& solver) const {
    for (int col : model_.y_list) {
      if (solver.lower(col) < solver.upper(col)) return col;
    }
    for (int col : model_.start_list) {
      if (solver.lower(col) < solver.upper(col)) return col;
    }
    return -1;
  }

  Cap evaluate_with_cache(const Schedule& sched) {
    Cap total = 0;
    for (int t = 0; t < model_.horizon; ++t) {
      total += cache_.solve_or_recall(inst_.network, config_at(inst_, sched, t)).value;
    }
    return total;
  }

  // Cut generation on the fractional relaxation: scale every open arc's
  // capacity by its y value, price theta against the fractional flow, and
  // install violated cuts as hard rows. Stops once a round adds nothing, the
  // objective stops improving, the round cap hits, or time runs out.
  int warm_start(LpSolver& solver, Clock::time_point t0) {
    int passes = 0;
    double prev = kInf;
    lpr_trace_.clear();
    const Network& net = inst_.network;
    std::vector<double> caps(net.arc_count());
    while (true) {
      double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
      if (elapsed >= cfg_.time_limit) break;
      if (solver.solve() != LpStatus::kOptimal) break;
      ++passes;
      double obj = solver.objective();
      lpr_trace_.push_back(obj);
      if (passes >= 2 && prev - obj <= 1e-6 * std::max(1.0, std::abs(prev))) break;
      prev = obj;
      if (passes >= cfg_.lpr_max_iters) break;

      int added = 0;
      for (int t = 0; t < model_.horizon; ++t) {
        caps[0] = static_cast<double>(net.arcs[0].cap);
        for (ArcId a = 1; a < net.arc_count(); ++a) {
          int col = model_.y_at(a, t);
          double y = col < 0 ? 1.0 : std::clamp(solver.value(col), 0.0, 1.0);
          caps[a] = static_cast<double>(net.arcs[a].cap) * y;
        }
        FlowResult<double> flow = max_flow_fractional(net, caps);
        if (solver.value(model_.theta_col[t]) > flow.value + 1e-6) {
          BendersCut cut = cut_from_duals(t, flow, net);
          if (auto row = master_cut_row(model_, cut, t)) {
            solver.add_row(*row);
            ++added;
          }
        }
      }
      if (added == 0) break;
    }
    return passes;
  }

  // Bound of last resort when time expired before the root LP finished:
  // every period is at most the all-open flow.
  double trivial_bound() const {
    return static_cast<double>(model_.all_open_flow) * model_.horizon;
  }

  Instance inst_;
  SolverConfig cfg_;
  MasterModel model_;
  FlowCache cache_;
  std::vector<EmittedCut> emitted_;
  std::vector<double> lpr_trace_;
  SolveReport report_;
};

inline SolveResult solve(const Instance& inst, const SolverConfig& cfg) {
  MasterSolver solver(inst, cfg);
  return solver.run();
}

inline double root_relaxation_bound(const Instance& inst, Mode mode) {
  SolverConfig cfg;
  cfg.mode = mode;
  MasterSolver solver(inst, cfg);
  return solver.root_bound();
}

}  // namespace flowsched
