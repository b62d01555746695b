#pragma once
// Memoized flow sub-problems keyed by the arc configuration. The solver asks
// for the same configurations over and over (identical periods, repeated
// callback rounds), so every distinct configuration is solved exactly once.

#include <unordered_map>

#include "flowsched/network.hpp"

namespace flowsched {

class FlowCache {
 public:
  // Returns the cached solution for `config`, solving it first if this is the
  // first time the configuration is requested. References stay valid until
  // clear(): entries are never evicted or overwritten.
  const FlowSolution& solve_or_recall(const Network& net, const ArcConfig& config) {
    if (arc_count_ == 0) arc_count_ = net.arc_count();
    if (arc_count_ != net.arc_count() || config.n != net.arc_count()) {
      throw ContractViolation("flow cache used with a different network");
    }
    auto it = entries_.find(config);
    if (it != entries_.end()) {
      ++recalled_;
      return it->second;
    }
    ++solved_;
    return entries_.emplace(config, max_flow(net, config)).first->second;
  }

  long long solved_count() const { return solved_; }
  long long recalled_count() const { return recalled_; }
  std::size_t size() const { return entries_.size(); }

  const std::unordered_map<ArcConfig, FlowSolution, ArcConfigHash>& entries() const {
    return entries_;
  }

  void clear() {
    entries_.clear();
    solved_ = 0;
    recalled_ = 0;
    arc_count_ = 0;
  }

 private:
  std::unordered_map<ArcConfig, FlowSolution, ArcConfigHash> entries_;
  long long solved_ = 0;
  long long recalled_ = 0;
  int arc_count_ = 0;
};

}  // namespace flowsched
