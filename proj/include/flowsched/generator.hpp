#pragma once
// Seeded generation of benchmark data: layered random networks and per-arc
// maintenance request streams. Everything is deterministic in the seed; the
// same seed always yields byte-identical serialized instances.

#include <algorithm>
#include <vector>

#include "flowsched/errors.hpp"
#include "flowsched/instance.hpp"
#include "flowsched/network.hpp"
#include "flowsched/rng.hpp"

namespace flowsched {

struct GenParams {
  int jobs_min = 5, jobs_max = 15;  // requests per arc
  int dur_min = 10, dur_max = 30;
  int win_min = 1, win_max = 35;  // feasible start periods per request
  int gap_max = 3;                // random idle gap between one arc's windows
  int min_horizon = 0;            // pad |T| up to this
  int max_horizon = 0;            // 0 = unbounded; otherwise stop before crossing it
  int max_requests = 0;           // 0 = unbounded; total cap across all arcs
};

// The three benchmark families differ only in how tight the start windows are.
inline GenParams params_for_set(int set_id) {
  GenParams p;
  switch (set_id) {
    case 1:
      p.win_min = 1;
      p.win_max = 35;
      break;
    case 2:
      p.win_min = 25;
      p.win_max = 35;
      break;
    case 3:
      p.win_min = 1;
      p.win_max = 10;
      break;
    default:
      throw ValidationError("unknown benchmark set " + std::to_string(set_id));
  }
  return p;
}

// Requests are laid out along each arc with pairwise disjoint [release,
// deadline] spans, so any in-window starts are overlap-free and per-arc
// feasibility holds by construction.
inline Instance generate_requests(const Network& net, std::uint64_t seed,
                                  const GenParams& params) {
  detail::require(params.jobs_min >= 0 && params.jobs_max >= params.jobs_min,
                  "generator: bad jobs range");
  detail::require(params.dur_min >= 1 && params.dur_max >= params.dur_min,
                  "generator: bad duration range");
  detail::require(params.win_min >= 1 && params.win_max >= params.win_min,
                  "generator: bad window range");
  Rng rng(seed);
  Instance inst;
  inst.network = net;
  int next_id = 0;
  bool full = false;
  for (int a = 1; a < net.arc_count() && !full; ++a) {
    int count = rng.uniform(params.jobs_min, params.jobs_max);
    int cursor = rng.uniform(0, params.gap_max);
    for (int j = 0; j < count; ++j) {
      if (params.max_requests > 0 && next_id >= params.max_requests) {
        full = true;
        break;
      }
      int dur = rng.uniform(params.dur_min, params.dur_max);
      int win = rng.uniform(params.win_min, params.win_max);
      int release = cursor;
      int deadline = release + win - 1 + dur - 1;
      if (params.max_horizon > 0 && deadline >= params.max_horizon) break;
      inst.requests.push_back({next_id++, a, release, deadline, dur});
      cursor = deadline + 1 + rng.uniform(0, params.gap_max);
    }
  }
  int needed = 1;
  for (const auto& r : inst.requests) needed = std::max(needed, r.deadline + 1);
  inst.horizon = std::max(needed, params.min_horizon);
  if (params.max_horizon > 0) inst.horizon = std::min(inst.horizon, params.max_horizon);
  validate_instance(inst);
  return inst;
}

inline Instance generate_instance(int set_id, const Network& net, std::uint64_t seed) {
  return generate_requests(net, seed, params_for_set(set_id));
}

// Random layered DAG: source feeds the first tier, consecutive tiers are
// joined by a random bipartite pattern (every node keeps at least one inbound
// and one outbound arc), the last tier feeds the sink. Capacities are uniform
// on [1, 20].
inline Network generate_layered_network(int node_count, int layer_count,
                                        std::uint64_t seed, double density = 0.4) {
  detail::require(node_count >= 2, "network generator: need at least 2 nodes");
  detail::require(density >= 0.0 && density <= 1.0, "network generator: bad density");
  int internal = node_count - 2;
  layer_count = std::max(1, std::min(layer_count, std::max(1, internal)));

  Rng rng(seed);
  RawGraph raw;
  for (int v = 0; v < node_count; ++v) raw.nodes.push_back(v);
  NodeId source = 0, sink = node_count - 1;

  std::vector<std::vector<NodeId>> tiers;
  tiers.push_back({source});
  if (internal > 0) {
    int v = 1;
    for (int l = 0; l < layer_count; ++l) {
      int size = internal / layer_count + (l < internal % layer_count ? 1 : 0);
      std::vector<NodeId> tier;
      for (int k = 0; k < size; ++k) tier.push_back(v++);
      if (!tier.empty()) tiers.push_back(tier);
    }
  }
  tiers.push_back({sink});

  int next_id = 1;
  auto add_arc = [&](NodeId u, NodeId v) {
    raw.arcs.push_back({next_id++, u, v, static_cast<Cap>(rng.uniform(1, 20))});
  };
  for (std::size_t l = 0; l + 1 < tiers.size(); ++l) {
    const auto& prev = tiers[l];
    const auto& cur = tiers[l + 1];
    std::vector<char> has_out(prev.size(), 0);
    for (std::size_t j = 0; j < cur.size(); ++j) {
      int pick = rng.uniform(0, static_cast<int>(prev.size()) - 1);
      add_arc(prev[pick], cur[j]);
      has_out[pick] = 1;
      for (std::size_t i = 0; i < prev.size(); ++i) {
        if (static_cast<int>(i) != pick && rng.uniform01() < density) {
          add_arc(prev[i], cur[j]);
          has_out[i] = 1;
        }
      }
    }
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (!has_out[i]) {
        add_arc(prev[i], cur[rng.uniform(0, static_cast<int>(cur.size()) - 1)]);
      }
    }
  }
  return augment_super_terminals(raw);
}

}  // namespace flowsched
