#pragma once
// Shared test networks and independent brute-force oracles. The oracles use
// their own reachability code on purpose: they must not depend on the library
// helpers they are checking.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "flowsched/network.hpp"
#include "flowsched/rng.hpp"

namespace fixtures {

using flowsched::Arc;
using flowsched::ArcConfig;
using flowsched::ArcId;
using flowsched::Cap;
using flowsched::Network;
using flowsched::NodeId;
using flowsched::RawGraph;
using flowsched::Rng;

// Two arcs in series, capacities 20 then 10; arc 0 capacity 31.
inline Network series_bottleneck_net() {
  RawGraph raw;
  raw.nodes = {0, 1, 2};
  raw.arcs = {{1, 0, 1, 20}, {2, 1, 2, 10}};
  return flowsched::augment_super_terminals(raw);
}

// Two parallel chains with a cheap middle tier (arcs 3..6, capacities
// 2,3,4,1) and a 20-unit outer tier (arcs 7..10, capacities 4,8,5,3).
// Source arcs 1,2 are wide enough that each tier's minimum cut is unique.
inline Network two_tier_net() {
  RawGraph raw;
  raw.nodes = {0, 1, 2, 3, 4, 5, 6, 7};
  raw.arcs = {{1, 0, 1, 16}, {2, 0, 2, 16}, {3, 1, 3, 2},  {4, 1, 4, 3},
              {5, 2, 5, 4},  {6, 2, 6, 1},  {7, 3, 7, 4},  {8, 4, 7, 8},
              {9, 5, 7, 5},  {10, 6, 7, 3}};
  return flowsched::augment_super_terminals(raw);
}

// Diamond where arc 4 (b->t, cap 20) is in no minimum cut yet still carries
// flow in every maximum flow.
inline Network diamond_net() {
  RawGraph raw;
  raw.nodes = {0, 1, 2, 3};
  raw.arcs = {{1, 0, 1, 10}, {2, 1, 3, 10}, {3, 0, 2, 5}, {4, 2, 3, 20}};
  return flowsched::augment_super_terminals(raw);
}

// Small random single-source/single-sink network: a random spine guarantees
// at least one source->sink path, extra arcs are sprinkled on top.
inline Network random_network(Rng& rng, int max_nodes = 8, int max_arcs = 10) {
  int nv = rng.uniform(2, max_nodes);
  std::vector<NodeId> nodes(nv);
  for (int i = 0; i < nv; ++i) nodes[i] = i;
  NodeId source = 0, sink = nv - 1;

  std::vector<Arc> arcs;
  int next_id = 1;
  // spine through a random increasing node sequence
  {
    NodeId at = source;
    while (at != sink) {
      NodeId to = (at + 1 == sink) ? sink : rng.uniform(at + 1, sink);
      arcs.push_back({next_id++, at, to, static_cast<Cap>(rng.uniform(1, 20))});
      at = to;
    }
  }
  int extra = rng.uniform(0, std::max(0, max_arcs - static_cast<int>(arcs.size())));
  for (int k = 0; k < extra; ++k) {
    NodeId u = rng.uniform(0, nv - 2);
    NodeId v = rng.uniform(u + 1, nv - 1);  // keep it acyclic
    arcs.push_back({next_id++, u, v, static_cast<Cap>(rng.uniform(1, 20))});
  }

  Network net;
  net.nodes = nodes;
  net.source = source;
  net.sink = sink;
  Cap total = 0;
  for (const Arc& a : arcs) total += a.cap;
  net.arcs.push_back({0, sink, source, total + 1});
  for (const Arc& a : arcs) {
    Arc copy = a;
    copy.id = static_cast<int>(net.arcs.size());
    net.arcs.push_back(copy);
  }
  flowsched::validate_network(net);
  return net;
}

inline ArcConfig random_config(Rng& rng, const Network& net, int closed_percent = 30) {
  ArcConfig c = ArcConfig::all_open(net.arc_count());
  for (int a = 1; a < net.arc_count(); ++a) {
    if (rng.uniform(0, 99) < closed_percent) c.set(a, false);
  }
  return c;
}

// --- independent oracles -------------------------------------------------

// Reachability written from scratch (adjacency matrix + worklist).
inline bool oracle_reaches(const Network& net, const std::vector<Cap>& eff,
                           const std::vector<char>& removed) {
  std::map<NodeId, std::set<NodeId>> out;
  for (const Arc& a : net.arcs) {
    if (a.id == 0 || eff[a.id] <= 0) continue;
    if (!removed.empty() && removed[a.id]) continue;
    out[a.tail].insert(a.head);
  }
  std::set<NodeId> seen{net.source};
  std::vector<NodeId> work{net.source};
  while (!work.empty()) {
    NodeId v = work.back();
    work.pop_back();
    for (NodeId w : out[v]) {
      if (seen.insert(w).second) work.push_back(w);
    }
  }
  return seen.count(net.sink) != 0;
}

// Minimum cut-set value by exhaustive enumeration over the positive-capacity
// arcs. Returns the capacity bound on any feasible flow (Cap max if the sink
// is unreachable outright, which callers treat as value 0 networks).
inline Cap oracle_min_cut(const Network& net, const ArcConfig& config) {
  std::vector<Cap> eff(net.arc_count());
  for (const Arc& a : net.arcs) eff[a.id] = config.open(a.id) ? a.cap : 0;
  std::vector<ArcId> positive;
  for (const Arc& a : net.arcs) {
    if (a.id != 0 && eff[a.id] > 0) positive.push_back(a.id);
  }
  std::vector<char> removed(net.arc_count(), 0);
  if (!oracle_reaches(net, eff, removed)) return 0;
  Cap best = eff[0];  // the total-flow arc always bounds the value
  int k = static_cast<int>(positive.size());
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    Cap value = 0;
    std::fill(removed.begin(), removed.end(), 0);
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        removed[positive[i]] = 1;
        value += eff[positive[i]];
      }
    }
    if (value < best && !oracle_reaches(net, eff, removed)) best = value;
  }
  return best;
}

// Arcs that belong to at least one minimum-value cut-set (all arcs open).
inline std::set<ArcId> oracle_min_cut_members(const Network& net) {
  ArcConfig all = ArcConfig::all_open(net.arc_count());
  Cap best = oracle_min_cut(net, all);
  std::vector<Cap> eff(net.arc_count());
  for (const Arc& a : net.arcs) eff[a.id] = a.cap;
  std::vector<ArcId> positive;
  for (const Arc& a : net.arcs) {
    if (a.id != 0 && eff[a.id] > 0) positive.push_back(a.id);
  }
  std::set<ArcId> members;
  int k = static_cast<int>(positive.size());
  std::vector<char> removed(net.arc_count(), 0);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    Cap value = 0;
    std::fill(removed.begin(), removed.end(), 0);
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        removed[positive[i]] = 1;
        value += eff[positive[i]];
      }
    }
    if (value == best && !oracle_reaches(net, eff, removed)) {
      for (int i = 0; i < k; ++i) {
        if (mask & (1u << i)) members.insert(positive[i]);
      }
    }
  }
  return members;
}

}  // namespace fixtures
