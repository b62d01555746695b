#pragma once
// Directed flow networks with a dedicated total-flow arc (arc 0, sink->source)
// and the max-flow / min-cut primitives the rest of the solver builds on.
//
// Conventions used throughout:
//  - arc ids are contiguous from 0; arc 0 is the total-flow arc and is always
//    open, so the flow value equals the flow carried by arc 0;
//  - a "cut-set" is a set of arcs whose removal leaves no source->sink path
//    through positive-capacity arcs; it is "simple" if no proper subset is
//    still a cut-set.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "flowsched/errors.hpp"

namespace flowsched {

using NodeId = int;
using ArcId = int;
using Cap = long long;

struct Arc {
  ArcId id = 0;
  NodeId tail = 0;
  NodeId head = 0;
  Cap cap = 0;
};

// A network that may still have several sources and sinks; arc ids 1..m.
struct RawGraph {
  std::vector<NodeId> nodes;
  std::vector<Arc> arcs;
};

struct Network {
  std::vector<NodeId> nodes;
  std::vector<Arc> arcs;  // arcs[i].id == i, arcs[0] is the total-flow arc
  NodeId source = 0;
  NodeId sink = 0;

  int arc_count() const { return static_cast<int>(arcs.size()); }

  std::unordered_map<NodeId, int> node_index() const {
    std::unordered_map<NodeId, int> idx;
    idx.reserve(nodes.size());
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) idx[nodes[i]] = i;
    return idx;
  }
};

// Which arcs are open; bit 0 (the total-flow arc) must stay set.
struct ArcConfig {
  int n = 0;
  std::vector<std::uint64_t> words;

  static ArcConfig all_open(int arc_count) {
    ArcConfig c;
    c.n = arc_count;
    c.words.assign((arc_count + 63) / 64, ~std::uint64_t{0});
    int spare = c.n % 64;
    if (spare != 0) c.words.back() &= (std::uint64_t{1} << spare) - 1;
    return c;
  }

  bool open(ArcId a) const { return (words[a >> 6] >> (a & 63)) & 1; }

  void set(ArcId a, bool is_open) {
    std::uint64_t bit = std::uint64_t{1} << (a & 63);
    if (is_open) {
      words[a >> 6] |= bit;
    } else {
      words[a >> 6] &= ~bit;
    }
  }

  bool operator==(const ArcConfig& o) const = default;
};

struct ArcConfigHash {
  std::size_t operator()(const ArcConfig& c) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(c.n);
    for (std::uint64_t w : c.words) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// A maximum flow together with the 0/1 duals of the capacity constraints.
// Invariants (checked by the test suite, relied upon by the cut machinery):
//  - flows[0] == value, every flow within [0, cap * open];
//  - sum of cap*open over {a : duals[a] == 1} == value;
//  - unless the total-flow arc itself binds, {a : duals[a] == 1} is a simple
//    cut-set of the full network.
template <class C>
struct FlowResult {
  C value{};
  std::vector<C> flows;
  std::vector<std::uint8_t> duals;
};

using FlowSolution = FlowResult<Cap>;

namespace detail {

// Reachability from the source through positive-capacity arcs, skipping arc 0
// and every arc flagged in `removed` (indexed by arc id; may be empty).
inline std::vector<char> forward_reachable(const Network& net,
                                           const std::vector<char>& removed) {
  auto idx = net.node_index();
  int nv = static_cast<int>(net.nodes.size());
  std::vector<std::vector<std::pair<int, ArcId>>> out(nv);
  for (const Arc& a : net.arcs) {
    if (a.id == 0 || a.cap <= 0) continue;
    if (!removed.empty() && removed[a.id]) continue;
    out[idx.at(a.tail)].push_back({idx.at(a.head), a.id});
  }
  std::vector<char> seen(nv, 0);
  std::deque<int> queue{idx.at(net.source)};
  seen[idx.at(net.source)] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (auto [w, arc] : out[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace detail

// True iff removing `arcs` (never containing arc 0) leaves no source->sink
// path through positive-capacity arcs.
inline bool is_cutset(const Network& net, const std::vector<ArcId>& arcs) {
  std::vector<char> removed(net.arc_count(), 0);
  for (ArcId a : arcs) removed[a] = 1;
  auto idx = net.node_index();
  return !detail::forward_reachable(net, removed)[idx.at(net.sink)];
}

inline void validate_network(const Network& net) {
  detail::require(!net.nodes.empty(), "network has no nodes");
  detail::require(net.arc_count() >= 2, "network needs arc 0 plus at least one arc");
  {
    std::unordered_map<NodeId, int> idx;
    for (NodeId v : net.nodes) {
      detail::require(idx.emplace(v, 1).second,
                      "duplicate node id " + std::to_string(v));
    }
    for (const Arc& a : net.arcs) {
      detail::require(idx.count(a.tail) && idx.count(a.head),
                      "arc " + std::to_string(a.id) + " references unknown node");
      detail::require(a.cap >= 0, "arc " + std::to_string(a.id) + " has negative capacity");
    }
    detail::require(idx.count(net.source) && idx.count(net.sink),
                    "source or sink is not a listed node");
  }
  detail::require(net.source != net.sink, "source equals sink");
  for (int i = 0; i < net.arc_count(); ++i) {
    detail::require(net.arcs[i].id == i,
                    "arc ids must be contiguous from 0; found " +
                        std::to_string(net.arcs[i].id) + " at position " +
                        std::to_string(i));
  }
  const Arc& a0 = net.arcs[0];
  detail::require(a0.tail == net.sink && a0.head == net.source,
                  "arc 0 must run sink->source");
  Cap out_of_source = 0;
  for (const Arc& a : net.arcs) {
    if (a.id != 0 && a.tail == net.source) out_of_source += a.cap;
  }
  detail::require(a0.cap > out_of_source,
                  "arc 0 capacity must exceed the capacity leaving the source");
}

// Turns a multi-source/multi-sink graph into a single-source/single-sink
// network and inserts the total-flow arc. Raw arc ids (1..m) are preserved;
// any super-terminal arcs get ids m+1.. and capacity equal to the bundle they
// replace. Arc 0 gets capacity 1 + sum of all other capacities so it can
// never be the binding constraint on ordinary solves.
inline Network augment_super_terminals(const RawGraph& raw) {
  detail::require(!raw.nodes.empty(), "graph has no nodes");
  int m = static_cast<int>(raw.arcs.size());
  detail::require(m >= 1, "graph has no arcs");
  {
    std::vector<char> seen(m + 1, 0);
    for (const Arc& a : raw.arcs) {
      detail::require(a.id >= 1 && a.id <= m && !seen[a.id],
                      "raw arc ids must be exactly 1..m; bad id " + std::to_string(a.id));
      seen[a.id] = 1;
      detail::require(a.cap >= 0, "arc " + std::to_string(a.id) + " has negative capacity");
    }
  }
  std::unordered_map<NodeId, Cap> out_cap, in_cap;
  std::unordered_map<NodeId, int> degree;
  for (NodeId v : raw.nodes) degree[v] = 0;
  for (const Arc& a : raw.arcs) {
    detail::require(degree.count(a.tail) && degree.count(a.head),
                    "arc " + std::to_string(a.id) + " references unknown node");
    out_cap[a.tail] += a.cap;
    in_cap[a.head] += a.cap;
  }
  std::vector<NodeId> sources, sinks;
  for (NodeId v : raw.nodes) {
    bool has_out = out_cap.count(v) != 0, has_in = in_cap.count(v) != 0;
    if (has_out && !has_in) sources.push_back(v);
    if (has_in && !has_out) sinks.push_back(v);
  }
  std::sort(sources.begin(), sources.end());
  std::sort(sinks.begin(), sinks.end());
  detail::require(!sources.empty(), "graph has no source");
  detail::require(!sinks.empty(), "graph has no sink");

  Network net;
  net.nodes = raw.nodes;
  std::vector<Arc> internal(raw.arcs);
  std::sort(internal.begin(), internal.end(),
            [](const Arc& x, const Arc& y) { return x.id < y.id; });

  NodeId fresh = *std::max_element(raw.nodes.begin(), raw.nodes.end()) + 1;
  if (sources.size() == 1) {
    net.source = sources[0];
  } else {
    net.source = fresh++;
    net.nodes.push_back(net.source);
    for (NodeId s : sources) {
      internal.push_back({++m, net.source, s, out_cap[s]});
    }
  }
  if (sinks.size() == 1) {
    net.sink = sinks[0];
  } else {
    net.sink = fresh++;
    net.nodes.push_back(net.sink);
    for (NodeId t : sinks) {
      internal.push_back({++m, t, net.sink, in_cap[t]});
    }
  }

  Cap total = 0;
  for (const Arc& a : internal) total += a.cap;
  net.arcs.push_back({0, net.sink, net.source, total + 1});
  for (const Arc& a : internal) net.arcs.push_back(a);
  validate_network(net);
  return net;
}

namespace detail {

template <class C>
struct ResidualEdge {
  int to;
  C cap;  // remaining capacity
};

// Shortest-augmenting-path max flow over explicit per-arc capacities.
// caps[0] bounds the total value (the circulation reading of arc 0). The
// returned duals are extracted by extract_duals below.
template <class C>
struct FlowEngine {
  const Network& net;
  std::unordered_map<NodeId, int> idx;
  int nv;
  std::vector<ResidualEdge<C>> edges;          // paired: edge 2k, reverse 2k+1
  std::vector<std::vector<int>> adj;           // node -> edge indices
  std::vector<int> arc_edge;                   // arc id -> forward edge index
  C eps;

  FlowEngine(const Network& n, const std::vector<C>& caps, C eps_)
      : net(n), idx(n.node_index()), nv(static_cast<int>(n.nodes.size())), eps(eps_) {
    adj.resize(nv);
    arc_edge.assign(net.arc_count(), -1);
    for (const Arc& a : net.arcs) {
      if (a.id == 0) continue;
      arc_edge[a.id] = static_cast<int>(edges.size());
      int u = idx.at(a.tail), v = idx.at(a.head);
      adj[u].push_back(static_cast<int>(edges.size()));
      edges.push_back({v, caps[a.id]});
      adj[v].push_back(static_cast<int>(edges.size()));
      edges.push_back({u, C{}});
    }
  }

  // BFS for a shortest residual path; fills parent edge per node.
  bool find_path(std::vector<int>& parent_edge) {
    parent_edge.assign(nv, -1);
    int s = idx.at(net.source), t = idx.at(net.sink);
    std::vector<char> seen(nv, 0);
    seen[s] = 1;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      if (v == t) return true;
      for (int e : adj[v]) {
        if (edges[e].cap > eps && !seen[edges[e].to]) {
          seen[edges[e].to] = 1;
          parent_edge[edges[e].to] = e;
          queue.push_back(edges[e].to);
        }
      }
    }
    return false;
  }

  FlowResult<C> run(const std::vector<C>& caps) {
    C value{};
    const C bound = caps[0];
    std::vector<int> parent_edge;
    int s = idx.at(net.source), t = idx.at(net.sink);
    while (find_path(parent_edge)) {
      C push = std::numeric_limits<C>::max();
      for (int v = t; v != s;) {
        int e = parent_edge[v];
        push = std::min(push, edges[e].cap);
        v = edges[e ^ 1].to;
      }
      if (push > bound - value) push = bound - value;
      if (push <= eps) break;  // the total-flow arc itself binds
      for (int v = t; v != s;) {
        int e = parent_edge[v];
        edges[e].cap -= push;
        edges[e ^ 1].cap += push;
        v = edges[e ^ 1].to;
      }
      value += push;
    }
    FlowResult<C> out;
    out.value = value;
    out.flows.assign(net.arc_count(), C{});
    out.flows[0] = value;
    for (const Arc& a : net.arcs) {
      if (a.id != 0) out.flows[a.id] = edges[arc_edge[a.id] ^ 1].cap;
    }
    return out;
  }
};

// Residual reachability from the source given explicit flows.
template <class C>
std::vector<char> residual_reachable(const Network& net, const std::vector<C>& caps,
                                     const std::vector<C>& flows, C eps) {
  auto idx = net.node_index();
  int nv = static_cast<int>(net.nodes.size());
  std::vector<std::vector<std::pair<int, C>>> out(nv);
  for (const Arc& a : net.arcs) {
    if (a.id == 0) continue;
    int u = idx.at(a.tail), v = idx.at(a.head);
    out[u].push_back({v, caps[a.id] - flows[a.id]});  // forward residual
    out[v].push_back({u, flows[a.id]});               // backward residual
  }
  std::vector<char> seen(nv, 0);
  std::deque<int> queue{idx.at(net.source)};
  seen[idx.at(net.source)] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (auto& [w, res] : out[v]) {
      if (res > eps && !seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

// Extracts the 0/1 capacity duals for a maximum flow. The canonical choice
// is the source side of the residual partition; closed crossing arcs stay in
// the support only while dropping them would leave a set that no longer cuts
// the full network. That keeps the support a simple cut-set while the cut
// value still equals the flow value.
template <class C>
std::vector<std::uint8_t> extract_duals(const Network& net, const std::vector<C>& caps,
                                        const FlowResult<C>& flow, C eps) {
  auto idx = net.node_index();
  std::vector<char> side = residual_reachable(net, caps, flow.flows, eps);
  std::vector<std::uint8_t> duals(net.arc_count(), 0);
  if (side[idx.at(net.sink)]) {
    duals[0] = 1;  // the total-flow arc itself is the bottleneck
    return duals;
  }
  std::vector<ArcId> crossing;
  for (const Arc& a : net.arcs) {
    if (a.id == 0 || a.cap <= 0) continue;
    if (side[idx.at(a.tail)] && !side[idx.at(a.head)]) crossing.push_back(a.id);
  }
  std::vector<char> removed(net.arc_count(), 0);
  for (ArcId a : crossing) removed[a] = 1;
  for (ArcId a : crossing) {
    if (caps[a] > eps) continue;  // open crossing arcs are never redundant
    removed[a] = 0;
    if (forward_reachable(net, removed)[idx.at(net.sink)]) {
      removed[a] = 1;  // still needed to cut the full network
    }
  }
  for (ArcId a : crossing) {
    if (removed[a]) duals[a] = 1;
  }
  return duals;
}

template <class C>
FlowResult<C> solve_flow(const Network& net, const std::vector<C>& caps, C eps) {
  FlowEngine<C> engine(net, caps, eps);
  FlowResult<C> out = engine.run(caps);
  out.duals = extract_duals(net, caps, out, eps);
  return out;
}

}  // namespace detail

// Maximum flow with closed arcs treated as capacity zero. Flows are integral
// and the duals mark the canonical minimum cut (see extract_duals).
inline FlowSolution max_flow(const Network& net, const ArcConfig& config) {
  if (config.n != net.arc_count() || !config.open(0)) {
    throw ContractViolation("arc configuration does not match the network");
  }
  std::vector<Cap> caps(net.arc_count());
  for (const Arc& a : net.arcs) caps[a.id] = config.open(a.id) ? a.cap : 0;
  return detail::solve_flow<Cap>(net, caps, 0);
}

// Maximum flow over explicit integer capacities; caps[0] bounds the total
// value. Used where capacities differ from the network's own (bottleneck
// probing boosts them).
inline FlowSolution max_flow_with_capacities(const Network& net,
                                             const std::vector<Cap>& caps) {
  return detail::solve_flow<Cap>(net, caps, 0);
}

// Same engine over explicit (possibly fractional) capacities; used by the
// LP-relaxation warm start where capacities are cap * y with fractional y.
inline FlowResult<double> max_flow_fractional(const Network& net,
                                              const std::vector<double>& caps) {
  return detail::solve_flow<double>(net, caps, 1e-9);
}

// Recomputes the duals for a caller-supplied maximum flow. Throws
// ContractViolation if the flow is not actually maximal for the configuration.
inline std::vector<std::uint8_t> min_cut_duals(const Network& net, const ArcConfig& config,
                                               const FlowSolution& flow) {
  if (config.n != net.arc_count() || !config.open(0)) {
    throw ContractViolation("arc configuration does not match the network");
  }
  std::vector<Cap> caps(net.arc_count());
  for (const Arc& a : net.arcs) caps[a.id] = config.open(a.id) ? a.cap : 0;
  if (static_cast<int>(flow.flows.size()) != net.arc_count() || flow.flows[0] != flow.value) {
    throw ContractViolation("flow vector does not match the network");
  }
  for (const Arc& a : net.arcs) {
    Cap f = flow.flows[a.id];
    if (f < 0 || f > caps[a.id]) {
      throw ContractViolation("flow on arc " + std::to_string(a.id) +
                              " violates its capacity");
    }
  }
  auto idx = net.node_index();
  std::vector<char> side = detail::residual_reachable<Cap>(net, caps, flow.flows, 0);
  if (side[idx.at(net.sink)] && flow.value < caps[0]) {
    throw ContractViolation("flow is not maximal: an augmenting path remains");
  }
  return detail::extract_duals<Cap>(net, caps, flow, Cap{0});
}

}  // namespace flowsched
