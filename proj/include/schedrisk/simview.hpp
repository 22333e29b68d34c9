#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "schedrisk/duration.hpp"
#include "schedrisk/errors.hpp"
#include "schedrisk/feasibility.hpp"
#include "schedrisk/model.hpp"
#include "schedrisk/types.hpp"

namespace schedrisk {

/// How an unstarted activity picks its start inside a replication.
/// ready_time keeps the baseline's resource-leveling delays: an
/// activity never starts before its planned start even when its
/// predecessors finish early. precedence_only lets everything float to
/// its earliest precedence-feasible start, which collapses all
/// candidate schedules of an instance onto one distribution — useful
/// for pure-chain analysis, not for comparing schedules.
enum class StartPolicy { ready_time, precedence_only };

/// How an activity that is ongoing at the control time keeps its
/// uncertainty. scaled_sd shrinks the sd linearly with the remaining
/// planned work (remaining mean r, sd = cv * r); all_or_nothing keeps
/// the full original distribution until the activity actually ends.
enum class OngoingPolicy { scaled_sd, all_or_nothing };

inline const char* start_policy_name(StartPolicy p) {
  return p == StartPolicy::ready_time ? "ready-time" : "precedence-only";
}

inline StartPolicy start_policy_from_name(const std::string& s) {
  if (s == "ready-time" || s == "ready_time") return StartPolicy::ready_time;
  if (s == "precedence-only" || s == "precedence_only") return StartPolicy::precedence_only;
  throw std::domain_error("unknown start policy '" + s + "'");
}

inline const char* ongoing_policy_name(OngoingPolicy p) {
  return p == OngoingPolicy::scaled_sd ? "scaled-sd" : "all-or-nothing";
}

inline OngoingPolicy ongoing_policy_from_name(const std::string& s) {
  if (s == "scaled-sd" || s == "scaled_sd") return OngoingPolicy::scaled_sd;
  if (s == "all-or-nothing" || s == "all_or_nothing") return OngoingPolicy::all_or_nothing;
  throw std::domain_error("unknown ongoing policy '" + s + "'");
}

/// One activity flattened for simulation: baseline timing, duration
/// spec, and predecessor indices into the flat array. The flat index
/// doubles as the activity key for the deviate source, so it must not
/// depend on the candidate schedule — it is derived from the instance
/// (or bundle) alone, which keeps common random numbers aligned across
/// candidates.
struct SimActivity {
  double planned_start = 0;
  double planned_dur = 0;
  double planned_finish = 0;
  DurationSpec spec;
  std::vector<int> preds;
};

struct SimView {
  std::string label;               // schedule label, carried into curves
  std::vector<SimActivity> acts;   // flat, instance order (projects concatenated)
  std::vector<int> order;          // topological order over flat indices
  double planned_makespan = 0;     // max planned finish, measured from time 0
};

/// The state of one activity at control time t, assuming execution
/// exactly as planned up to t: a deterministic elapsed portion plus a
/// spec for the stochastic remainder.
struct ConditionalSpec {
  double elapsed = 0;      // work already executed (deterministic)
  DurationSpec remaining;  // distribution of the rest; deterministic when eliminated
};

/// Case analysis behind the conditional replications. Finished
/// activities have no remaining uncertainty; ongoing ones keep a
/// remainder with mean equal to the planned remaining work and, under
/// scaled-sd, an sd shrunk in proportion (the cv is unchanged);
/// unstarted ones keep their original spec.
inline ConditionalSpec conditional_spec(const SimActivity& a, double t,
                                        OngoingPolicy policy = OngoingPolicy::scaled_sd) {
  ConditionalSpec c;
  if (a.planned_finish <= t) {
    c.elapsed = a.planned_dur;
    c.remaining = {Family::deterministic, 0.0, 0.0};
  } else if (a.planned_start < t) {
    c.elapsed = t - a.planned_start;
    if (policy == OngoingPolicy::scaled_sd)
      c.remaining = {a.spec.family, a.planned_finish - t, a.spec.cv};
    else
      c.remaining = a.spec;  // full original distribution until the activity ends
  } else {
    c.elapsed = 0;
    c.remaining = a.spec;
  }
  return c;
}

namespace detail {

inline void append_project(SimView& view, const ProjectInstance& inst, const Schedule& sched,
                           const DurationModel& model, int source_floor) {
  const ResolvedStarts rs = resolve_starts(sched, inst, source_floor);
  const int base = static_cast<int>(view.acts.size());
  const auto preds = inst.predecessor_lists();
  for (std::size_t i = 0; i < inst.activities.size(); ++i) {
    const Activity& a = inst.activities[i];
    SimActivity sa;
    sa.planned_start = static_cast<double>(rs.start[i]);
    sa.planned_dur = static_cast<double>(a.duration);
    sa.planned_finish = sa.planned_start + sa.planned_dur;
    sa.spec = model.at(inst.name, a.file_id);
    if (sa.spec.mean != sa.planned_dur)
      throw ValidationError("model mean for activity " + std::to_string(a.file_id) + " of '" +
                            inst.name + "' does not match its planned duration");
    sa.preds.reserve(preds[i].size());
    for (int p : preds[i]) sa.preds.push_back(base + p);
    view.acts.push_back(std::move(sa));
    view.planned_makespan = std::max(view.planned_makespan, view.acts.back().planned_finish);
  }
  for (int idx : topological_order(inst)) view.order.push_back(base + idx);
}

}  // namespace detail

/// Flatten one schedule of a single instance.
inline SimView build_simview(const ProjectInstance& inst, const Schedule& sched,
                             const DurationModel& model) {
  if (sched.instance_name != inst.name)
    throw ValidationError("schedule is for project '" + sched.instance_name +
                          "', not for '" + inst.name + "'");
  SimView view;
  view.label = sched.label;
  detail::append_project(view, inst, sched, model, -1);
  return view;
}

/// Flatten a multi-project bundle: one schedule per project, arrivals
/// pin the project sources, all times stay on the shared global axis.
inline SimView build_simview(const MultiProjectProblem& prob, const std::vector<Schedule>& scheds,
                             const DurationModel& model, const std::string& label = "") {
  SimView view;
  view.label = label;
  for (const Schedule& s : scheds) {
    const ProjectEntry* entry = prob.by_name(s.instance_name);
    if (entry == nullptr)
      throw ValidationError("schedule for unknown project '" + s.instance_name + "'");
  }
  for (const ProjectEntry& entry : prob.projects) {
    const Schedule* mine = nullptr;
    for (const Schedule& s : scheds)
      if (s.instance_name == entry.name) mine = &s;
    if (mine == nullptr) throw ValidationError("no schedule for project '" + entry.name + "'");
    detail::append_project(view, entry.instance, *mine, model, entry.arrival);
  }
  return view;
}

/// One conditional replication: the project has executed exactly as
/// planned up to control time t, so activities finished by t are
/// pinned to the plan, ongoing ones keep only their remaining
/// uncertainty, and unstarted ones are fully stochastic. `factors` is
/// the per-activity duration multiplier for this replication (one
/// deviate per activity, reused at every t). Returns the total
/// duration, i.e. the max finish over all activities from time 0.
inline double simulate_duration(const SimView& view, double t, const std::vector<double>& factors,
                                StartPolicy start_policy = StartPolicy::ready_time,
                                OngoingPolicy ongoing_policy = OngoingPolicy::scaled_sd,
                                std::vector<double>* finish_scratch = nullptr) {
  const std::size_t n = view.acts.size();
  std::vector<double> local;
  std::vector<double>& finish = finish_scratch != nullptr ? *finish_scratch : local;
  finish.assign(n, 0.0);
  double total = 0;
  for (int idx : view.order) {
    const SimActivity& a = view.acts[static_cast<std::size_t>(idx)];
    double f;
    if (a.planned_finish <= t) {
      // finished on plan: uncertainty fully eliminated
      f = a.planned_finish;
    } else if (a.planned_start < t) {
      // ongoing: elapsed work is locked in, only the remainder varies
      if (ongoing_policy == OngoingPolicy::scaled_sd)
        f = t + (a.planned_finish - t) * factors[static_cast<std::size_t>(idx)];
      else
        f = std::max(t, a.planned_start + a.planned_dur * factors[static_cast<std::size_t>(idx)]);
    } else {
      // unstarted: fully stochastic, start per policy
      double ready = 0;
      for (int p : a.preds) ready = std::max(ready, finish[static_cast<std::size_t>(p)]);
      const double start =
          start_policy == StartPolicy::ready_time ? std::max(a.planned_start, ready) : ready;
      f = start + a.planned_dur * factors[static_cast<std::size_t>(idx)];
    }
    finish[static_cast<std::size_t>(idx)] = f;
    total = std::max(total, f);
  }
  return total;
}

/// Duration multipliers for one replication: one deviate per activity,
/// mapped through each activity's family. Evaluated once and reused at
/// every control time (the multiplier does not depend on t).
inline void replication_factors(const SimView& view, const DeviateSource& deviates,
                                std::uint32_t rep, std::vector<double>& out) {
  out.resize(view.acts.size());
  for (std::size_t i = 0; i < view.acts.size(); ++i) {
    const DurationSpec& spec = view.acts[i].spec;
    if (spec.family == Family::deterministic || spec.cv == 0) {
      out[i] = 1.0;
    } else {
      const double z = deviates(rep, static_cast<std::uint32_t>(i));
      out[i] = unit_factor(spec.family, spec.cv, z);
    }
  }
}

}  // namespace schedrisk
