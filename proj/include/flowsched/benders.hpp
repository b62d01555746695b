#pragma once
// Benders cuts for per-period flow estimates, and the bottleneck-lifting
// sweep that discovers the network's cut-set structure before any search.

#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowsched/network.hpp"

namespace flowsched {

// Scope marker: the cut constrains every period, not a single one.
inline constexpr int kAllTimes = -1;

struct CutTerm {
  ArcId arc;
  Cap coeff;  // the arc's capacity when the cut was emitted
};

// theta_t <= sum of coeff * y_{arc,t} over terms, for each period in scope.
struct BendersCut {
  int time = kAllTimes;        // one period index, or kAllTimes
  std::vector<CutTerm> terms;  // ascending arc id, all coefficients > 0
};

// Right-hand side of the cut under a given open/closed configuration.
inline Cap cut_bound(const BendersCut& cut, const ArcConfig& config) {
  Cap rhs = 0;
  for (const CutTerm& term : cut.terms) {
    if (config.open(term.arc)) rhs += term.coeff;
  }
  return rhs;
}

// Builds the cut whose support is the dual cut-set of a solved flow. The cut
// holds with equality at the configuration that generated `flow`: closed
// support arcs contribute nothing there, and the open ones sum to the flow
// value by strong duality. Works for integral and fractional-capacity flows
// alike; coefficients are always the arcs' installed capacities.
template <class C>
inline BendersCut cut_from_duals(int time, const FlowResult<C>& flow, const Network& net) {
  detail::require(static_cast<int>(flow.duals.size()) == net.arc_count(),
                  "duals do not match the network");
  if (flow.duals[0]) {
    throw ContractViolation("total-flow arc in cut support");
  }
  BendersCut cut;
  cut.time = time;
  for (ArcId a = 1; a < net.arc_count(); ++a) {
    if (flow.duals[a]) cut.terms.push_back({a, net.arcs[a].cap});
  }
  if (cut.terms.empty() && static_cast<double>(flow.value) > 1e-9) {
    throw ContractViolation("empty cut support at positive flow");
  }
  return cut;
}

// True iff removing `arcs` breaks every source-to-sink path of the full
// network and no proper subset does.
inline bool is_simple_cutset(const Network& net, const std::vector<ArcId>& arcs) {
  if (!is_cutset(net, arcs)) return false;
  std::vector<ArcId> rest;
  rest.reserve(arcs.size());
  for (std::size_t skip = 0; skip < arcs.size(); ++skip) {
    rest.clear();
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (i != skip) rest.push_back(arcs[i]);
    }
    if (is_cutset(net, rest)) return false;
  }
  return true;
}

inline std::vector<ArcId> cut_support(const BendersCut& cut) {
  std::vector<ArcId> arcs;
  arcs.reserve(cut.terms.size());
  for (const CutTerm& term : cut.terms) arcs.push_back(term.arc);
  return arcs;
}

// Does the cut over-estimate (or match) the real flow at this configuration?
inline bool cut_is_valid(const Network& net, const BendersCut& cut, const ArcConfig& config) {
  return max_flow(net, config).value <= cut_bound(cut, config);
}

// Lifts one bottleneck per round: solve the all-open flow, emit a cut over
// the binding cut-set, then raise those arcs' capacities past the total-flow
// bound so the next round exposes the next bottleneck. Stops when the
// total-flow arc itself binds. Emitted coefficients are always the original
// capacities; the network is never mutated.
inline std::vector<BendersCut> pre_cuts(const Network& net) {
  std::vector<Cap> caps(net.arc_count());
  for (const Arc& arc : net.arcs) caps[arc.id] = arc.cap;
  const Cap lifted = net.arcs[0].cap + 1;

  std::vector<BendersCut> cuts;
  // Every round lifts at least one arc that no earlier round lifted (a cut
  // made only of lifted arcs would exceed the total-flow bound, which ends
  // the loop instead), so arc_count rounds always suffice.
  for (int round = 0; round <= net.arc_count(); ++round) {
    FlowSolution sol = max_flow_with_capacities(net, caps);
    if (sol.duals[0]) return cuts;
    BendersCut cut = cut_from_duals(kAllTimes, sol, net);
    if (cut.terms.empty()) return cuts;  // no source-to-sink path at all
    for (const CutTerm& term : cut.terms) caps[term.arc] = lifted;
    cuts.push_back(std::move(cut));
  }
  throw ContractViolation("bottleneck lifting failed to terminate");
}

inline nlohmann::json cut_to_json(const BendersCut& cut) {
  nlohmann::json j;
  if (cut.time == kAllTimes) {
    j["t"] = "all";
  } else {
    j["t"] = cut.time;
  }
  auto terms = nlohmann::json::array();
  for (const CutTerm& term : cut.terms) {
    terms.push_back({{"arc", term.arc}, {"coeff", term.coeff}});
  }
  j["terms"] = std::move(terms);
  return j;
}

}  // namespace flowsched
