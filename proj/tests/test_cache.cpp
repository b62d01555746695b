#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "flowsched/flow_cache.hpp"
#include "flowsched/rng.hpp"

using namespace flowsched;
using namespace fixtures;

TEST_CASE("repeat lookups are recalls, not solves") {
  Network net = two_tier_net();
  FlowCache cache;
  ArcConfig all = ArcConfig::all_open(net.arc_count());

  const FlowSolution& first = cache.solve_or_recall(net, all);
  CHECK(first.value == 10);
  CHECK(cache.solved_count() == 1);
  CHECK(cache.recalled_count() == 0);

  const FlowSolution& again = cache.solve_or_recall(net, all);
  CHECK(cache.solved_count() == 1);
  CHECK(cache.recalled_count() == 1);
  CHECK(&again == &first);  // same entry, not a copy
}

TEST_CASE("distinct configurations each solve once") {
  Network net = two_tier_net();
  FlowCache cache;

  ArcConfig all = ArcConfig::all_open(net.arc_count());
  ArcConfig partial = all;
  partial.set(3, false);

  cache.solve_or_recall(net, all);
  cache.solve_or_recall(net, partial);
  cache.solve_or_recall(net, all);
  cache.solve_or_recall(net, partial);
  cache.solve_or_recall(net, partial);

  CHECK(cache.solved_count() == 2);
  CHECK(cache.recalled_count() == 3);
  CHECK(cache.size() == 2);
}

TEST_CASE("counters match distinct/total over random request streams") {
  Rng rng(404);
  for (int round = 0; round < 40; ++round) {
    Network net = random_network(rng);
    FlowCache cache;
    std::unordered_map<ArcConfig, FlowSolution, ArcConfigHash> seen;
    int total = 0;
    for (int q = 0; q < 60; ++q) {
      ArcConfig cfg = random_config(rng, net);
      const FlowSolution& got = cache.solve_or_recall(net, cfg);
      ++total;

      // Recalled answers must be indistinguishable from a fresh solve.
      FlowSolution fresh = max_flow(net, cfg);
      REQUIRE(got.value == fresh.value);
      REQUIRE(got.flows == fresh.flows);
      REQUIRE(got.duals == fresh.duals);
      seen.emplace(cfg, fresh);
    }
    CHECK(cache.solved_count() == static_cast<long long>(seen.size()));
    CHECK(cache.recalled_count() == total - static_cast<long long>(seen.size()));
    CHECK(cache.size() == seen.size());
  }
}

TEST_CASE("cache rejects a mismatched network") {
  Network a = two_tier_net();
  Network b = series_bottleneck_net();
  FlowCache cache;
  cache.solve_or_recall(a, ArcConfig::all_open(a.arc_count()));
  CHECK_THROWS_AS(cache.solve_or_recall(b, ArcConfig::all_open(b.arc_count())),
                  ContractViolation);
}

TEST_CASE("clear resets counters and storage") {
  Network net = series_bottleneck_net();
  FlowCache cache;
  cache.solve_or_recall(net, ArcConfig::all_open(net.arc_count()));
  cache.clear();
  CHECK(cache.solved_count() == 0);
  CHECK(cache.recalled_count() == 0);
  CHECK(cache.size() == 0);
  cache.solve_or_recall(net, ArcConfig::all_open(net.arc_count()));
  CHECK(cache.solved_count() == 1);
}
