#include <catch2/catch_amalgamated.hpp>

#include "flowsched/generator.hpp"
#include "flowsched/master.hpp"

#include "fixtures.hpp"

using namespace flowsched;
using namespace fixtures;

namespace {

Instance make_instance(Network net, int horizon, std::vector<MaintenanceRequest> reqs) {
  Instance inst;
  inst.network = std::move(net);
  inst.horizon = horizon;
  inst.requests = std::move(reqs);
  validate_instance(inst);
  return inst;
}

SolverConfig config_for(Mode mode) {
  SolverConfig cfg;
  cfg.mode = mode;
  return cfg;
}

const Mode kAllModes[] = {Mode::kDbd, Mode::kPrecuts, Mode::kMain, Mode::kLpr};

// Small random instance a brute-force sweep can certify.
Instance tiny_instance(std::uint64_t seed) {
  Rng rng(seed);
  Network net = random_network(rng, 6, 7);
  GenParams p;
  p.jobs_min = 0;
  p.jobs_max = 1;
  p.dur_min = 1;
  p.dur_max = 2;
  p.win_min = 1;
  p.win_max = 3;
  p.gap_max = 2;
  p.min_horizon = 4;
  p.max_horizon = 8;
  p.max_requests = 3;
  return generate_requests(net, seed * 7919 + 1, p);
}

}  // namespace

TEST_CASE("mode names round trip") {
  for (Mode m : kAllModes) {
    REQUIRE(mode_from_name(mode_name(m)) == m);
  }
  REQUIRE_THROWS_AS(mode_from_name("fast"), ValidationError);
}

TEST_CASE("report json round trip") {
  SolveReport r;
  r.mode = "main";
  r.objective = 1234;
  r.best_bound = 1234.5;
  r.abs_gap = 0.5;
  r.rel_gap = 0.000405;
  r.nodes = 42;
  r.lazy_cuts = 17;
  r.flows_solved = 99;
  r.flows_recalled = 301;
  r.lp_passes = 3;
  r.wall_time_s = 1.25;

  SolveReport back = report_from_json(report_to_json(r));
  REQUIRE(back.mode == r.mode);
  REQUIRE(back.objective == r.objective);
  REQUIRE(back.best_bound == r.best_bound);
  REQUIRE(back.abs_gap == r.abs_gap);
  REQUIRE(back.rel_gap == r.rel_gap);
  REQUIRE(back.nodes == r.nodes);
  REQUIRE(back.lazy_cuts == r.lazy_cuts);
  REQUIRE(back.flows_solved == r.flows_solved);
  REQUIRE(back.flows_recalled == r.flows_recalled);
  REQUIRE(back.lp_passes == r.lp_passes);
  REQUIRE(back.wall_time_s == r.wall_time_s);

  auto j = report_to_json(r);
  j.erase("nodes");
  REQUIRE_THROWS_AS(report_from_json(j), ParseError);

  std::string table = format_report_table(r);
  REQUIRE(table.find("objective") != std::string::npos);
  REQUIRE(table.find("1234") != std::string::npos);
  REQUIRE(table.find("flow recalled") != std::string::npos);
}

TEST_CASE("zero requests solve to horizon times the all-open flow") {
  Instance inst = make_instance(series_bottleneck_net(), 4, {});
  for (Mode mode : kAllModes) {
    SolveResult res = solve(inst, config_for(mode));
    INFO("mode " << mode_name(mode));
    REQUIRE(res.report.objective == 40);
    REQUIRE(res.report.best_bound == 40.0);
    REQUIRE(res.report.abs_gap == 0.0);
    REQUIRE(res.report.nodes <= 1);
    REQUIRE(res.report.lazy_cuts == 0);
    REQUIRE(res.schedule.start.empty());
    if (mode == Mode::kLpr) REQUIRE(res.report.lp_passes == 1);
  }
}

TEST_CASE("one short outage on the bottleneck arc costs one period of flow") {
  Instance inst = make_instance(series_bottleneck_net(), 3, {{7, 2, 0, 2, 1}});
  for (Mode mode : kAllModes) {
    SolveResult res = solve(inst, config_for(mode));
    INFO("mode " << mode_name(mode));
    REQUIRE(res.report.objective == 20);
    REQUIRE(res.report.best_bound == 20.0);
    REQUIRE(evaluate_schedule(inst, res.schedule) == 20);
    REQUIRE(res.schedule.start.count(7) == 1);
  }

  // Without cut rows the root relaxation sits at the all-open box bound,
  // strictly above the best integer point.
  double root = root_relaxation_bound(inst, Mode::kDbd);
  REQUIRE(root == Catch::Approx(30.0).margin(1e-6));
  REQUIRE(root > 20.0 + 0.5);

  SolveResult dbd = solve(inst, config_for(Mode::kDbd));
  REQUIRE(dbd.report.lazy_cuts >= 1);
}

TEST_CASE("start columns cover exactly the feasible window") {
  Instance inst = make_instance(series_bottleneck_net(), 30, {{0, 2, 0, 29, 10}});
  MasterModel model = build_master(inst, Mode::kDbd);
  REQUIRE(model.starts.size() == 1);
  REQUIRE(model.starts[0].size() == 21);  // starts 0..20 inclusive
  REQUIRE(model.starts[0].front().first == 0);
  REQUIRE(model.starts[0].back().first == 20);
  // 30 thetas, 30 covered cells on arc 2, 21 starts
  REQUIRE(model.lp.columns.size() == 81);
  REQUIRE(model.y_at(2, 0) >= 0);
  REQUIRE(model.y_at(1, 0) == -1);  // no job can ever close arc 1
}

TEST_CASE("folded periods get no arc-open column") {
  Instance inst = make_instance(series_bottleneck_net(), 3, {{0, 2, 1, 1, 1}});
  MasterModel model = build_master(inst, Mode::kDbd);
  REQUIRE(model.y_at(2, 0) == -1);
  REQUIRE(model.y_at(2, 1) >= 0);
  REQUIRE(model.y_at(2, 2) == -1);
  REQUIRE(model.y_list.size() == 1);

  SolveResult res = solve(inst, config_for(Mode::kMain));
  REQUIRE(res.report.objective == 20);
  REQUIRE(res.schedule.start.at(0) == 1);
}

TEST_CASE("bottleneck rows are installed per period only where a job can bite") {
  // One job apiece on a cheap-tier and an outer-tier arc, windows spanning
  // every period. The cut over the source arcs has no schedulable arc, so it
  // contributes no rows.
  Instance inst = make_instance(two_tier_net(), 5,
                                {{0, 3, 0, 4, 1}, {1, 7, 0, 4, 1}});
  MasterModel plain = build_master(inst, Mode::kDbd);
  MasterModel seeded = build_master(inst, Mode::kPrecuts);
  REQUIRE(plain.lp.rows.size() == 2 + 10);  // one-start rows + busy cells
  REQUIRE(seeded.lp.rows.size() == plain.lp.rows.size() + 2 * 5);
}

TEST_CASE("two jobs on one arc never overlap and cost the minimum closed time") {
  Instance inst = make_instance(series_bottleneck_net(), 6,
                                {{0, 2, 0, 2, 2}, {1, 2, 1, 5, 2}});
  BruteForceResult brute = brute_force(inst);
  REQUIRE(brute.objective == 20);  // 4 closed periods is unavoidable
  for (Mode mode : kAllModes) {
    SolveResult res = solve(inst, config_for(mode));
    INFO("mode " << mode_name(mode));
    REQUIRE(res.report.objective == 20);
    REQUIRE_NOTHROW(validate_schedule(inst, res.schedule));
  }
}

TEST_CASE("all modes agree with exhaustive enumeration on tiny instances") {
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Instance inst = tiny_instance(seed);
    BruteForceResult brute = brute_force(inst);
    ++solved;
    for (Mode mode : kAllModes) {
      SolveResult res = solve(inst, config_for(mode));
      INFO("seed " << seed << " mode " << mode_name(mode));
      REQUIRE(res.report.objective == brute.objective);
      REQUIRE(res.report.best_bound >= res.report.objective);
      REQUIRE(res.report.best_bound - res.report.objective < 0.999);
      REQUIRE(evaluate_schedule(inst, res.schedule) == res.report.objective);
    }
  }
  REQUIRE(solved == 30);
}

TEST_CASE("lazy cuts are valid everywhere and tight where they were found") {
  Instance inst = make_instance(two_tier_net(), 4,
                                {{0, 3, 0, 3, 2}, {1, 7, 0, 3, 1}, {2, 8, 1, 3, 1}});
  MasterSolver solver(inst, config_for(Mode::kDbd));
  SolveResult res = solver.run();
  REQUIRE(res.report.lazy_cuts >= 1);
  REQUIRE(static_cast<long long>(solver.emitted_cuts().size()) == res.report.lazy_cuts);

  Rng rng(99);
  for (const EmittedCut& ec : solver.emitted_cuts()) {
    REQUIRE(cut_bound(ec.cut, ec.config) == ec.flow_value);  // tight at origin
    for (int k = 0; k < 20; ++k) {
      ArcConfig probe = random_config(rng, inst.network);
      REQUIRE(cut_is_valid(inst.network, ec.cut, probe));
    }
  }
}

TEST_CASE("relaxation bounds tighten as modes add rows") {
  std::vector<Instance> cases;
  cases.push_back(make_instance(series_bottleneck_net(), 3, {{7, 2, 0, 2, 1}}));
  cases.push_back(make_instance(two_tier_net(), 4,
                                {{0, 3, 0, 3, 2}, {1, 7, 0, 3, 1}}));
  for (std::uint64_t seed : {2ull, 11ull, 23ull}) cases.push_back(tiny_instance(seed));

  for (std::size_t i = 0; i < cases.size(); ++i) {
    INFO("case " << i);
    double dbd = root_relaxation_bound(cases[i], Mode::kDbd);
    double pre = root_relaxation_bound(cases[i], Mode::kPrecuts);
    double lpr = root_relaxation_bound(cases[i], Mode::kLpr);
    REQUIRE(pre <= dbd + 1e-6);
    REQUIRE(lpr <= pre + 1e-6);
  }
}

TEST_CASE("relaxation pass counting") {
  // No requests: the first pass finds no violated cut and stops.
  Instance idle = make_instance(series_bottleneck_net(), 4, {});
  SolveResult res = solve(idle, config_for(Mode::kLpr));
  REQUIRE(res.report.lp_passes == 1);

  // A chain with a bypass: the seeded rows cover only the source-side cut,
  // which no job can touch, so the master starts bare. Pass one discovers the
  // mixed cut over the chain arc, pass two shifts the outage to the uncut
  // period at the same objective and stops on the plateau.
  RawGraph raw;
  raw.nodes = {0, 1, 2};
  raw.arcs = {{1, 0, 1, 5}, {2, 1, 2, 5}, {3, 0, 2, 5}};
  Instance shifty =
      make_instance(augment_super_terminals(raw), 2, {{0, 2, 0, 1, 1}});
  res = solve(shifty, config_for(Mode::kLpr));
  REQUIRE(res.report.lp_passes == 2);
  REQUIRE(res.report.objective == 15);
  REQUIRE(brute_force(shifty).objective == 15);
}

TEST_CASE("flow counters come from the shared cache") {
  Instance inst = make_instance(two_tier_net(), 6,
                                {{0, 3, 0, 5, 2}, {1, 8, 0, 5, 3}, {2, 9, 2, 5, 1}});
  MasterSolver solver(inst, config_for(Mode::kMain));
  SolveResult res = solver.run();
  REQUIRE(res.report.flows_solved == static_cast<long long>(solver.cache().solved_count()));
  REQUIRE(res.report.flows_recalled ==
          static_cast<long long>(solver.cache().recalled_count()));
  REQUIRE(res.report.flows_recalled >= 1);  // horizon repeats configurations
  REQUIRE_NOTHROW(validate_schedule(inst, res.schedule));
  REQUIRE(evaluate_schedule(inst, res.schedule) == res.report.objective);
}

TEST_CASE("repeated runs are bit identical") {
  Instance inst = tiny_instance(17);
  SolveResult a = solve(inst, config_for(Mode::kMain));
  SolveResult b = solve(inst, config_for(Mode::kMain));
  REQUIRE(a.report.objective == b.report.objective);
  REQUIRE(a.report.best_bound == b.report.best_bound);
  REQUIRE(a.report.nodes == b.report.nodes);
  REQUIRE(a.report.lazy_cuts == b.report.lazy_cuts);
  REQUIRE(a.report.flows_solved == b.report.flows_solved);
  REQUIRE(a.schedule.start == b.schedule.start);
}

TEST_CASE("a spent clock still yields a feasible schedule and honest bound") {
  Instance inst = make_instance(two_tier_net(), 8,
                                {{0, 3, 0, 7, 3}, {1, 7, 0, 7, 2}, {2, 9, 1, 7, 2}});
  SolverConfig cfg = config_for(Mode::kMain);
  cfg.time_limit = 1e-9;
  SolveResult res = solve(inst, cfg);
  REQUIRE_NOTHROW(validate_schedule(inst, res.schedule));
  REQUIRE(evaluate_schedule(inst, res.schedule) == res.report.objective);
  REQUIRE(res.report.best_bound >= static_cast<double>(res.report.objective));
  REQUIRE(res.report.nodes == 0);
}

TEST_CASE("exhaustive search refuses oversized instances") {
  std::vector<MaintenanceRequest> reqs;
  for (int k = 0; k < 8; ++k) {
    reqs.push_back({k, static_cast<ArcId>(3 + k), 0, 20, 1});  // 21 starts each
  }
  Instance inst = make_instance(two_tier_net(), 22, reqs);
  REQUIRE_THROWS_AS(brute_force(inst), InstanceTooLarge);
}

TEST_CASE("exhaustive search reports the earliest schedule among ties") {
  Instance inst = make_instance(series_bottleneck_net(), 3, {{7, 2, 0, 2, 1}});
  BruteForceResult brute = brute_force(inst);
  REQUIRE(brute.objective == 20);
  REQUIRE(brute.schedule.start.at(7) == 0);
}

TEST_CASE("solver configuration is validated") {
  Instance inst = make_instance(series_bottleneck_net(), 3, {});
  SolverConfig cfg;
  cfg.abs_gap = 0.0;
  REQUIRE_THROWS_AS(MasterSolver(inst, cfg), ValidationError);
  cfg = SolverConfig{};
  cfg.time_limit = -1.0;
  REQUIRE_THROWS_AS(MasterSolver(inst, cfg), ValidationError);
  cfg = SolverConfig{};
  cfg.lpr_max_iters = 0;
  REQUIRE_THROWS_AS(MasterSolver(inst, cfg), ValidationError);
}
