#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "schedrisk/cpm.hpp"
#include "schedrisk/errors.hpp"
#include "schedrisk/rng.hpp"
#include "schedrisk/types.hpp"

namespace schedrisk {

/// Priority rules for the serial schedule-generation scheme. Each rule
/// is a total order over eligible activities; ties always fall back to
/// the activity id, so generation is deterministic.
struct PriorityRule {
  enum class Kind { min_slack, latest_finish, shortest_duration, most_successors, random };
  Kind kind = Kind::min_slack;
  std::uint64_t seed = 0;  // used by the random rule only

  static PriorityRule min_slack() { return {Kind::min_slack, 0}; }
  static PriorityRule latest_finish() { return {Kind::latest_finish, 0}; }
  static PriorityRule shortest_duration() { return {Kind::shortest_duration, 0}; }
  static PriorityRule most_successors() { return {Kind::most_successors, 0}; }
  static PriorityRule random(std::uint64_t seed) { return {Kind::random, seed}; }
};

inline std::string rule_name(const PriorityRule& rule) {
  switch (rule.kind) {
    case PriorityRule::Kind::min_slack: return "min-slack";
    case PriorityRule::Kind::latest_finish: return "latest-finish";
    case PriorityRule::Kind::shortest_duration: return "shortest-duration";
    case PriorityRule::Kind::most_successors: return "most-successors";
    case PriorityRule::Kind::random: return "random:" + std::to_string(rule.seed);
  }
  return "?";
}

/// Parse "min-slack", "latest-finish", "shortest-duration",
/// "most-successors", "random" or "random:<seed>".
inline PriorityRule rule_from_name(const std::string& name) {
  if (name == "min-slack") return PriorityRule::min_slack();
  if (name == "latest-finish") return PriorityRule::latest_finish();
  if (name == "shortest-duration") return PriorityRule::shortest_duration();
  if (name == "most-successors") return PriorityRule::most_successors();
  if (name == "random") return PriorityRule::random(0);
  if (name.rfind("random:", 0) == 0) {
    try {
      return PriorityRule::random(std::stoull(name.substr(7)));
    } catch (const std::exception&) {
      throw std::domain_error("bad random rule seed in '" + name + "'");
    }
  }
  throw std::domain_error("unknown priority rule '" + name + "'");
}

namespace detail {

// Smaller key = scheduled earlier. Derived once per project.
inline std::vector<double> priority_keys(const ProjectInstance& inst, const PriorityRule& rule,
                                         std::uint64_t project_salt) {
  const std::size_t n = inst.activities.size();
  std::vector<double> key(n, 0.0);
  switch (rule.kind) {
    case PriorityRule::Kind::min_slack:
    case PriorityRule::Kind::latest_finish: {
      const CpmResult cpm = cpm_makespan(inst);
      const std::vector<int> ls = latest_starts(inst, cpm.makespan);
      for (std::size_t i = 0; i < n; ++i) {
        if (rule.kind == PriorityRule::Kind::min_slack)
          key[i] = static_cast<double>(ls[i] - cpm.earliest_start[i]);
        else
          key[i] = static_cast<double>(ls[i] + inst.activities[i].duration);
      }
      break;
    }
    case PriorityRule::Kind::shortest_duration:
      for (std::size_t i = 0; i < n; ++i) key[i] = static_cast<double>(inst.activities[i].duration);
      break;
    case PriorityRule::Kind::most_successors:
      for (std::size_t i = 0; i < n; ++i)
        key[i] = -static_cast<double>(inst.activities[i].successors.size());
      break;
    case PriorityRule::Kind::random:
      for (std::size_t i = 0; i < n; ++i)
        key[i] = uniform_hash(hash_mix(rule.seed, project_salt),
                              static_cast<std::uint64_t>(inst.activities[i].file_id), 0.0, 1.0);
      break;
  }
  return key;
}

// Shared usage timeline for one resource pool.
struct Pool {
  int capacity = 0;
  std::vector<int> usage;  // usage[t], t on the global axis
};

inline bool fits(const Pool& pool, int demand, int start, int dur) {
  for (int t = start; t < start + dur; ++t)
    if (pool.usage[static_cast<std::size_t>(t)] + demand > pool.capacity) return false;
  return true;
}

inline void occupy(Pool& pool, int demand, int start, int dur) {
  for (int t = start; t < start + dur; ++t) pool.usage[static_cast<std::size_t>(t)] += demand;
}

// One activity in the joint (multi-project) scheduling pass.
struct SgsItem {
  int project = 0;    // index into the problem's project list (0 for single)
  int local = 0;      // internal id within its project
  int duration = 0;
  int ready_floor = 0;             // project arrival
  std::vector<int> preds;          // flat indices
  std::vector<std::pair<int, int>> demands;  // (pool index, demand > 0)
  double key = 0;
};

// Core serial pass over flattened items. Picks the eligible item with
// the smallest (key, project, local id) and places it at the earliest
// precedence- and capacity-feasible period.
inline std::vector<int> run_serial(std::vector<SgsItem>& items, std::vector<Pool>& pools) {
  const std::size_t n = items.size();
  std::vector<int> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) pending[i] = static_cast<int>(items[i].preds.size());
  std::vector<int> start(n, -1);
  std::vector<char> done(n, 0);
  for (std::size_t placed = 0; placed < n; ++placed) {
    int best = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || pending[i] > 0) continue;
      if (best < 0 || items[i].key < items[static_cast<std::size_t>(best)].key ||
          (items[i].key == items[static_cast<std::size_t>(best)].key &&
           (items[i].project < items[static_cast<std::size_t>(best)].project ||
            (items[i].project == items[static_cast<std::size_t>(best)].project &&
             items[i].local < items[static_cast<std::size_t>(best)].local))))
        best = static_cast<int>(i);
    }
    if (best < 0) throw ValidationError("precedence graph is not acyclic");
    SgsItem& it = items[static_cast<std::size_t>(best)];
    int ready = it.ready_floor;
    for (int p : it.preds)
      ready = std::max(ready, start[static_cast<std::size_t>(p)] +
                                  items[static_cast<std::size_t>(p)].duration);
    int t = ready;
    for (;;) {
      bool ok = true;
      for (const auto& [pool, demand] : it.demands)
        if (!fits(pools[static_cast<std::size_t>(pool)], demand, t, it.duration)) {
          ok = false;
          break;
        }
      if (ok) break;
      ++t;
    }
    for (const auto& [pool, demand] : it.demands)
      occupy(pools[static_cast<std::size_t>(pool)], demand, t, it.duration);
    start[static_cast<std::size_t>(best)] = t;
    done[static_cast<std::size_t>(best)] = 1;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i])
        for (int p : items[i].preds)
          if (p == best) --pending[i];
  }
  return start;
}

inline void check_pool_capacity(const ProjectInstance& inst, std::size_t r, int capacity) {
  for (const Activity& a : inst.activities)
    if (a.demands[r] > capacity)
      throw ValidationError("activity " + std::to_string(a.file_id) + " of '" + inst.name +
                            "' demands " + std::to_string(a.demands[r]) + " of R" +
                            std::to_string(r + 1) + " but only " + std::to_string(capacity) +
                            " exists; no schedule can fit it");
}

inline Schedule starts_to_schedule(const ProjectInstance& inst, const std::vector<int>& start,
                                   int base, const std::string& label) {
  Schedule out;
  out.instance_name = inst.name;
  out.label = label;
  for (std::size_t i = 0; i < inst.activities.size(); ++i) {
    const Activity& a = inst.activities[i];
    if (a.duration == 0 && (static_cast<int>(i) == inst.source() || static_cast<int>(i) == inst.sink()))
      continue;  // dummies are implied, not listed
    out.starts[a.file_id] = start[static_cast<std::size_t>(base) + i];
  }
  return out;
}

}  // namespace detail

/// Serial schedule generation for a single instance: activities are
/// placed one at a time in priority order, each at its earliest
/// precedence- and resource-feasible period. The result is feasible by
/// construction.
inline Schedule serial_sgs(const ProjectInstance& inst, const PriorityRule& rule,
                           const std::string& label = "") {
  const auto preds = inst.predecessor_lists();
  int horizon = 1;
  for (const Activity& a : inst.activities) horizon += a.duration;

  std::vector<detail::Pool> pools;
  pools.reserve(inst.resources.size());
  for (std::size_t r = 0; r < inst.resources.size(); ++r) {
    detail::check_pool_capacity(inst, r, inst.resources[r].capacity);
    pools.push_back({inst.resources[r].capacity,
                     std::vector<int>(static_cast<std::size_t>(horizon), 0)});
  }

  const std::vector<double> keys = detail::priority_keys(inst, rule, 0);
  std::vector<detail::SgsItem> items(inst.activities.size());
  for (std::size_t i = 0; i < inst.activities.size(); ++i) {
    detail::SgsItem& it = items[i];
    it.project = 0;
    it.local = static_cast<int>(i);
    it.duration = inst.activities[i].duration;
    it.ready_floor = 0;
    it.preds.assign(preds[i].begin(), preds[i].end());
    for (std::size_t r = 0; r < inst.resources.size(); ++r)
      if (inst.activities[i].demands[r] > 0)
        it.demands.emplace_back(static_cast<int>(r), inst.activities[i].demands[r]);
    it.key = keys[i];
  }
  const std::vector<int> start = detail::run_serial(items, pools);
  return detail::starts_to_schedule(inst, start, 0, label.empty() ? rule_name(rule) : label);
}

/// Joint serial generation for a multi-project bundle: all projects
/// compete for the global resources on one shared timeline, local
/// resources stay per-project, and no activity starts before its
/// project's arrival.
inline std::vector<Schedule> serial_sgs(const MultiProjectProblem& prob, const PriorityRule& rule,
                                        const std::string& label = "") {
  int horizon = 1;
  for (const ProjectEntry& e : prob.projects) {
    horizon += e.arrival;
    for (const Activity& a : e.instance.activities) horizon += a.duration;
  }

  std::vector<detail::Pool> pools;
  // pool layout: first the globals (in map order), then each project's
  // non-global locals
  std::vector<int> global_pool_of_rid;  // 0-based resource id -> pool index or -1
  {
    int max_rid = -1;
    for (const auto& [rid, cap] : prob.global_capacity) max_rid = std::max(max_rid, rid);
    global_pool_of_rid.assign(static_cast<std::size_t>(max_rid + 1), -1);
    for (const auto& [rid, cap] : prob.global_capacity) {
      global_pool_of_rid[static_cast<std::size_t>(rid)] = static_cast<int>(pools.size());
      pools.push_back({cap, std::vector<int>(static_cast<std::size_t>(horizon), 0)});
      for (const ProjectEntry& e : prob.projects) detail::check_pool_capacity(e.instance, static_cast<std::size_t>(rid), cap);
    }
  }

  std::vector<detail::SgsItem> items;
  std::vector<int> base_of_project;
  for (std::size_t pi = 0; pi < prob.projects.size(); ++pi) {
    const ProjectInstance& inst = prob.projects[pi].instance;
    const auto preds = inst.predecessor_lists();
    const std::vector<double> keys = detail::priority_keys(inst, rule, pi + 1);
    const int base = static_cast<int>(items.size());
    base_of_project.push_back(base);

    std::vector<int> pool_of_local(inst.resources.size(), -1);
    for (std::size_t r = 0; r < inst.resources.size(); ++r) {
      const bool is_global = r < global_pool_of_rid.size() && global_pool_of_rid[r] >= 0;
      if (is_global) {
        pool_of_local[r] = global_pool_of_rid[r];
      } else {
        detail::check_pool_capacity(inst, r, inst.resources[r].capacity);
        pool_of_local[r] = static_cast<int>(pools.size());
        pools.push_back({inst.resources[r].capacity,
                         std::vector<int>(static_cast<std::size_t>(horizon), 0)});
      }
    }

    for (std::size_t i = 0; i < inst.activities.size(); ++i) {
      detail::SgsItem it;
      it.project = static_cast<int>(pi);
      it.local = static_cast<int>(i);
      it.duration = inst.activities[i].duration;
      it.ready_floor = prob.projects[pi].arrival;
      for (int p : preds[i]) it.preds.push_back(base + p);
      for (std::size_t r = 0; r < inst.resources.size(); ++r)
        if (inst.activities[i].demands[r] > 0)
          it.demands.emplace_back(pool_of_local[r], inst.activities[i].demands[r]);
      it.key = keys[i];
      items.push_back(std::move(it));
    }
  }

  const std::vector<int> start = detail::run_serial(items, pools);
  std::vector<Schedule> out;
  for (std::size_t pi = 0; pi < prob.projects.size(); ++pi)
    out.push_back(detail::starts_to_schedule(prob.projects[pi].instance, start,
                                             base_of_project[pi],
                                             label.empty() ? rule_name(rule) : label));
  return out;
}

/// The standard rule portfolio used to produce candidate schedules:
/// the four deterministic rules plus `extra_random` randomized passes.
inline std::vector<PriorityRule> default_rules(int extra_random = 2, std::uint64_t seed = 1) {
  std::vector<PriorityRule> rules = {PriorityRule::min_slack(), PriorityRule::latest_finish(),
                                     PriorityRule::shortest_duration(),
                                     PriorityRule::most_successors()};
  for (int i = 0; i < extra_random; ++i) rules.push_back(PriorityRule::random(seed + static_cast<std::uint64_t>(i)));
  return rules;
}

}  // namespace schedrisk
