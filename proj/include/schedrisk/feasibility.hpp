#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "schedrisk/errors.hpp"
#include "schedrisk/types.hpp"

namespace schedrisk {

struct PrecedenceViolation {
  std::string project;
  int pred_file_id = 0;
  int succ_file_id = 0;
  int gap = 0;  // start_succ - (start_pred + duration_pred), negative when violated

  bool operator==(const PrecedenceViolation&) const = default;
};

struct ResourceViolation {
  std::string project;  // empty for global resources
  int resource_id = 0;  // 1-based for reporting
  int period = 0;
  int usage = 0;
  int capacity = 0;

  bool operator==(const ResourceViolation&) const = default;
};

struct FeasibilityReport {
  std::vector<PrecedenceViolation> precedence_violations;
  std::vector<ResourceViolation> resource_violations;
  bool feasible = true;

  void finish() { feasible = precedence_violations.empty() && resource_violations.empty(); }
};

/// Usage per integer period for every resource of one instance, over
/// [0, makespan) of the given schedule.
struct ResourceProfile {
  std::map<int, std::vector<int>> usage;  // internal resource id -> per-period usage
};

namespace detail {

// Resolved view of a schedule against its instance: starts by internal
// id, dummies derived (source at the minimum start, sink at the maximum
// finish). Throws on structural mismatches.
struct ResolvedStarts {
  std::vector<int> start;   // by internal id
  std::vector<int> finish;  // start + duration
  int min_start = 0;
  int max_finish = 0;
};

inline ResolvedStarts resolve_starts(const Schedule& sched, const ProjectInstance& inst,
                                     int source_floor = -1) {
  const int n = inst.num_activities();
  ResolvedStarts rs;
  rs.start.assign(n, 0);
  rs.finish.assign(n, 0);

  for (const auto& [fid, s] : sched.starts) {
    const Activity* a = inst.by_file_id(fid);
    if (a == nullptr)
      throw ValidationError("schedule '" + sched.label + "' references unknown activity " +
                            std::to_string(fid) + " of '" + inst.name + "'");
    if (is_dummy_id(inst, a->id))
      throw ValidationError("schedule '" + sched.label + "' lists a start for dummy activity " +
                            std::to_string(fid));
    if (s < 0) throw ValidationError("negative start for activity " + std::to_string(fid));
    rs.start[a->id] = s;
  }
  for (int i = 0; i < n; ++i) {
    if (is_dummy_id(inst, i)) continue;
    if (!sched.starts.count(inst.activities[i].file_id))
      throw ValidationError("schedule '" + sched.label + "' misses activity " +
                            std::to_string(inst.activities[i].file_id) + " of '" + inst.name + "'");
  }

  int min_start = 0;
  int max_finish = 0;
  bool any = false;
  for (int i = 0; i < n; ++i) {
    if (is_dummy_id(inst, i)) continue;
    const int f = rs.start[i] + inst.activities[i].duration;
    min_start = any ? std::min(min_start, rs.start[i]) : rs.start[i];
    max_finish = std::max(max_finish, f);
    any = true;
  }
  if (!any) min_start = max_finish = std::max(0, source_floor);
  rs.start[inst.source()] = source_floor >= 0 ? source_floor : min_start;
  rs.finish[inst.source()] = rs.start[inst.source()];
  rs.start[inst.sink()] = max_finish;
  for (int i = 0; i < n; ++i)
    if (!is_dummy_id(inst, i)) rs.finish[i] = rs.start[i] + inst.activities[i].duration;
  rs.finish[inst.sink()] = max_finish;
  rs.min_start = min_start;
  rs.max_finish = max_finish;
  return rs;
}

inline void check_precedence(const Schedule& sched, const ProjectInstance& inst,
                             const ResolvedStarts& rs, const std::string& project_name,
                             FeasibilityReport& report) {
  (void)sched;
  for (const Activity& a : inst.activities) {
    for (int s : a.successors) {
      const int gap = rs.start[s] - rs.finish[a.id];
      if (gap < 0)
        report.precedence_violations.push_back(
            {project_name, a.file_id, inst.activities[s].file_id, gap});
    }
  }
}

// Adds each activity's demand to a per-period accumulator.
inline void accumulate_usage(const ProjectInstance& inst, const ResolvedStarts& rs, int resource,
                             std::vector<int>& periods) {
  for (const Activity& a : inst.activities) {
    if (a.demands.empty() || resource >= static_cast<int>(a.demands.size())) continue;
    const int d = a.demands[resource];
    if (d == 0 || a.duration == 0) continue;
    const int from = rs.start[a.id];
    const int to = rs.finish[a.id];
    if (to > static_cast<int>(periods.size())) periods.resize(to, 0);
    for (int t = from; t < to; ++t) periods[t] += d;
  }
}

}  // namespace detail

/// Per-period usage of every resource of the instance under a schedule.
inline ResourceProfile resource_profile(const Schedule& sched, const ProjectInstance& inst) {
  const auto rs = detail::resolve_starts(sched, inst);
  ResourceProfile profile;
  for (const Resource& r : inst.resources) {
    std::vector<int> periods(rs.max_finish, 0);
    detail::accumulate_usage(inst, rs, r.id, periods);
    profile.usage[r.id] = std::move(periods);
  }
  return profile;
}

/// Check a single-project schedule: every arc (i, j) must satisfy
/// start_j >= start_i + duration_i, and per-period resource usage must
/// stay within capacity. Structural mismatches (unknown or missing
/// activities) throw; infeasibility is reported as data.
inline FeasibilityReport validate(const Schedule& sched, const ProjectInstance& inst) {
  const auto rs = detail::resolve_starts(sched, inst);
  FeasibilityReport report;
  detail::check_precedence(sched, inst, rs, inst.name, report);
  for (const Resource& r : inst.resources) {
    std::vector<int> periods(rs.max_finish, 0);
    detail::accumulate_usage(inst, rs, r.id, periods);
    for (int t = 0; t < static_cast<int>(periods.size()); ++t)
      if (periods[t] > r.capacity)
        report.resource_violations.push_back({inst.name, r.id + 1, t, periods[t], r.capacity});
  }
  report.finish();
  return report;
}

/// Check one schedule per project against a multi-project problem.
/// Arrival dates pin each project's source, so an activity scheduled
/// before its project arrives is reported as a precedence violation
/// against the source. Global resources are pooled across projects;
/// the remaining resources use each project's own capacities.
inline FeasibilityReport validate(const std::vector<Schedule>& schedules,
                                  const MultiProjectProblem& prob) {
  FeasibilityReport report;
  std::vector<detail::ResolvedStarts> resolved;
  resolved.reserve(prob.projects.size());

  for (const ProjectEntry& p : prob.projects) {
    auto it = std::find_if(schedules.begin(), schedules.end(),
                           [&](const Schedule& s) { return s.instance_name == p.name; });
    if (it == schedules.end())
      throw ValidationError("missing schedule for project '" + p.name + "'");
    resolved.push_back(detail::resolve_starts(*it, p.instance, p.arrival));
    detail::check_precedence(*it, p.instance, resolved.back(), p.name, report);
  }
  for (const Schedule& s : schedules)
    if (prob.by_name(s.instance_name) == nullptr)
      throw ValidationError("schedule for unknown project '" + s.instance_name + "'");

  // Local resources: per project, skipping globally pooled ids.
  for (size_t pi = 0; pi < prob.projects.size(); ++pi) {
    const ProjectEntry& p = prob.projects[pi];
    for (const Resource& r : p.instance.resources) {
      if (prob.global_capacity.count(r.id)) continue;
      std::vector<int> periods(resolved[pi].max_finish, 0);
      detail::accumulate_usage(p.instance, resolved[pi], r.id, periods);
      for (int t = 0; t < static_cast<int>(periods.size()); ++t)
        if (periods[t] > r.capacity)
          report.resource_violations.push_back({p.name, r.id + 1, t, periods[t], r.capacity});
    }
  }
  // Global resources: summed across all projects.
  for (const auto& [rid, cap] : prob.global_capacity) {
    std::vector<int> periods;
    for (size_t pi = 0; pi < prob.projects.size(); ++pi)
      detail::accumulate_usage(prob.projects[pi].instance, resolved[pi], rid, periods);
    for (int t = 0; t < static_cast<int>(periods.size()); ++t)
      if (periods[t] > cap) report.resource_violations.push_back({"", rid + 1, t, periods[t], cap});
  }
  report.finish();
  return report;
}

/// Planned makespan of a schedule: max finish minus min start (0 by
/// convention for schedules anchored at time zero).
inline int makespan(const Schedule& sched, const ProjectInstance& inst) {
  const auto rs = detail::resolve_starts(sched, inst);
  return rs.max_finish - rs.min_start;
}

}  // namespace schedrisk
