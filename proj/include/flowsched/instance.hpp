#pragma once
// Maintenance instances: a network plus per-arc outage requests over a
// discrete horizon, schedules assigning each request a start period, JSON
// (de)serialization for both, and the schedule evaluation oracle.
//
// Time is 0-based; a request started at t keeps its arc closed through
// [t, t + duration - 1]. Starts must lie in [release, deadline-duration+1].

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowsched/errors.hpp"
#include "flowsched/network.hpp"

namespace flowsched {

struct MaintenanceRequest {
  int id = 0;
  ArcId arc = 0;
  int release = 0;
  int deadline = 0;
  int duration = 1;

  int latest_start() const { return deadline - duration + 1; }
  bool running(int start, int t) const { return start <= t && t < start + duration; }
};

struct Instance {
  Network network;
  int horizon = 0;
  std::vector<MaintenanceRequest> requests;
};

struct Schedule {
  std::map<int, int> start;  // request id -> start period
};

// Earliest-deadline-first feasibility of one arc's request set; this is the
// definition of "schedulable" used by validation and the generator.
inline bool edf_feasible(std::vector<MaintenanceRequest> reqs, int horizon) {
  std::sort(reqs.begin(), reqs.end(), [](const auto& a, const auto& b) {
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    if (a.release != b.release) return a.release < b.release;
    return a.id < b.id;
  });
  int cursor = 0;
  for (const auto& r : reqs) {
    int start = std::max(r.release, cursor);
    if (start > r.latest_start() || r.deadline >= horizon) return false;
    cursor = start + r.duration;
  }
  return true;
}

inline void validate_instance(const Instance& inst) {
  validate_network(inst.network);
  detail::require(inst.horizon >= 1, "horizon must be at least 1");
  std::unordered_map<int, int> seen;
  std::unordered_map<ArcId, std::vector<MaintenanceRequest>> by_arc;
  for (const auto& r : inst.requests) {
    std::string name = "request " + std::to_string(r.id);
    detail::require(seen.emplace(r.id, 1).second, name + ": duplicate id");
    detail::require(r.arc >= 1 && r.arc < inst.network.arc_count(),
                    name + ": unknown arc " + std::to_string(r.arc));
    detail::require(r.duration >= 1, name + ": duration must be positive");
    detail::require(r.release >= 0, name + ": negative release");
    detail::require(r.latest_start() >= r.release, name + ": empty start window");
    detail::require(r.deadline < inst.horizon,
                    name + ": deadline beyond the horizon");
    by_arc[r.arc].push_back(r);
  }
  for (auto& [arc, reqs] : by_arc) {
    detail::require(edf_feasible(reqs, inst.horizon),
                    "arc " + std::to_string(arc) +
                        ": requests cannot be scheduled without overlap");
  }
}

// The arc configuration induced at period t: an arc is closed while any of
// its scheduled requests is running.
inline ArcConfig config_at(const Instance& inst, const Schedule& sched, int t) {
  ArcConfig cfg = ArcConfig::all_open(inst.network.arc_count());
  for (const auto& r : inst.requests) {
    auto it = sched.start.find(r.id);
    if (it != sched.start.end() && r.running(it->second, t)) cfg.set(r.arc, false);
  }
  return cfg;
}

// Checks a schedule against the instance, throwing ValidationError on the
// first offense (missing request, start outside window, same-arc overlap).
inline void validate_schedule(const Instance& inst, const Schedule& sched) {
  std::unordered_map<ArcId, std::vector<std::pair<int, int>>> busy;  // arc -> [start,end]
  for (const auto& r : inst.requests) {
    auto it = sched.start.find(r.id);
    detail::require(it != sched.start.end(),
                    "schedule is missing request " + std::to_string(r.id));
    int s = it->second;
    detail::require(s >= r.release && s <= r.latest_start(),
                    "request " + std::to_string(r.id) + ": start outside window");
    busy[r.arc].push_back({s, s + r.duration - 1});
  }
  for (auto& [arc, spans] : busy) {
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i) {
      detail::require(spans[i].first > spans[i - 1].second,
                      "arc " + std::to_string(arc) + ": overlapping jobs on one arc");
    }
  }
}

// Total flow over the horizon under the schedule; independent of the solver
// path (fresh flow solves, memoized only within this call).
inline Cap evaluate_schedule(const Instance& inst, const Schedule& sched) {
  validate_schedule(inst, sched);
  std::unordered_map<ArcConfig, Cap, ArcConfigHash> memo;
  Cap total = 0;
  for (int t = 0; t < inst.horizon; ++t) {
    ArcConfig cfg = config_at(inst, sched, t);
    auto it = memo.find(cfg);
    if (it == memo.end()) it = memo.emplace(cfg, max_flow(inst.network, cfg).value).first;
    total += it->second;
  }
  return total;
}

// --- JSON ------------------------------------------------------------------

namespace detail {

using nlohmann::json;

inline const json& need(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing");
  return *it;
}

inline long long need_int(const json& obj, const char* key, const std::string& path) {
  const json& v = need(obj, key, path);
  if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
  return v.get<long long>();
}

}  // namespace detail

inline std::string serialize_instance(const Instance& inst) {
  nlohmann::json j;
  j["nodes"] = inst.network.nodes;
  j["source"] = inst.network.source;
  j["sink"] = inst.network.sink;
  j["horizon"] = inst.horizon;
  j["arcs"] = nlohmann::json::array();
  for (const Arc& a : inst.network.arcs) {
    j["arcs"].push_back({{"id", a.id}, {"tail", a.tail}, {"head", a.head}, {"cap", a.cap}});
  }
  j["requests"] = nlohmann::json::array();
  for (const auto& r : inst.requests) {
    j["requests"].push_back({{"id", r.id},
                             {"arc", r.arc},
                             {"release", r.release},
                             {"deadline", r.deadline},
                             {"duration", r.duration}});
  }
  return j.dump(2) + "\n";
}

inline Instance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance: invalid JSON: ") + e.what());
  }
  Instance inst;
  const auto& nodes = detail::need(j, "nodes", "instance");
  if (!nodes.is_array()) throw ParseError("instance.nodes: expected an array");
  for (const auto& v : nodes) {
    if (!v.is_number_integer()) throw ParseError("instance.nodes: expected integers");
    inst.network.nodes.push_back(v.get<int>());
  }
  const auto& arcs = detail::need(j, "arcs", "instance");
  if (!arcs.is_array()) throw ParseError("instance.arcs: expected an array");
  int i = 0;
  for (const auto& a : arcs) {
    std::string path = "instance.arcs[" + std::to_string(i++) + "]";
    Arc arc;
    arc.id = static_cast<int>(detail::need_int(a, "id", path));
    arc.tail = static_cast<int>(detail::need_int(a, "tail", path));
    arc.head = static_cast<int>(detail::need_int(a, "head", path));
    arc.cap = detail::need_int(a, "cap", path);
    inst.network.arcs.push_back(arc);
  }
  inst.network.source = static_cast<int>(detail::need_int(j, "source", "instance"));
  inst.network.sink = static_cast<int>(detail::need_int(j, "sink", "instance"));
  inst.horizon = static_cast<int>(detail::need_int(j, "horizon", "instance"));
  const auto& reqs = detail::need(j, "requests", "instance");
  if (!reqs.is_array()) throw ParseError("instance.requests: expected an array");
  i = 0;
  for (const auto& r : reqs) {
    std::string path = "instance.requests[" + std::to_string(i++) + "]";
    MaintenanceRequest req;
    req.id = static_cast<int>(detail::need_int(r, "id", path));
    req.arc = static_cast<int>(detail::need_int(r, "arc", path));
    req.release = static_cast<int>(detail::need_int(r, "release", path));
    req.deadline = static_cast<int>(detail::need_int(r, "deadline", path));
    req.duration = static_cast<int>(detail::need_int(r, "duration", path));
    inst.requests.push_back(req);
  }
  validate_instance(inst);
  return inst;
}

inline std::string serialize_schedule(const Schedule& sched) {
  nlohmann::json starts = nlohmann::json::object();
  for (const auto& [id, t] : sched.start) starts[std::to_string(id)] = t;
  nlohmann::json j;
  j["start"] = starts;
  return j.dump(2) + "\n";
}

inline Schedule parse_schedule(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule: invalid JSON: ") + e.what());
  }
  const auto& starts = detail::need(j, "start", "schedule");
  if (!starts.is_object()) throw ParseError("schedule.start: expected an object");
  Schedule sched;
  for (auto it = starts.begin(); it != starts.end(); ++it) {
    int id = 0;
    try {
      id = std::stoi(it.key());
    } catch (...) {
      throw ParseError("schedule.start: key '" + it.key() + "' is not a request id");
    }
    if (!it.value().is_number_integer()) {
      throw ParseError("schedule.start." + it.key() + ": expected an integer");
    }
    sched.start[id] = it.value().get<int>();
  }
  return sched;
}

}  // namespace flowsched
