#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "schedrisk/feasibility.hpp"
#include "schedrisk/model.hpp"
#include "schedrisk/srb.hpp"

namespace schedrisk {

/// Risk summary for one candidate schedule. For infeasible candidates
/// only `label`, `feasible` and `rejection` are meaningful.
struct ScheduleRisk {
  std::string label;
  bool feasible = false;
  std::string rejection;
  double planned = 0;
  double mean = 0;
  double p10 = 0;
  double p50 = 0;
  double p90 = 0;
  double srv_value = 0;
  SRBCurve curve;
};

struct RiskReport {
  std::vector<ScheduleRisk> schedules;  // in candidate order
  std::vector<std::string> ranking;     // feasible labels, ascending SRV, ties by label
};

struct RankOptions {
  SimOptions sim;
  int grid_step = 1;
};

namespace detail {

inline std::string rejection_summary(const FeasibilityReport& rep) {
  std::string msg;
  if (!rep.precedence_violations.empty()) {
    const PrecedenceViolation& v = rep.precedence_violations.front();
    msg += "activity " + std::to_string(v.succ_file_id) + " starts " + std::to_string(-v.gap) +
           " period(s) before predecessor " + std::to_string(v.pred_file_id) + " finishes";
  }
  if (!rep.resource_violations.empty()) {
    if (!msg.empty()) msg += "; ";
    const ResourceViolation& v = rep.resource_violations.front();
    msg += "R" + std::to_string(v.resource_id) + " over capacity at period " +
           std::to_string(v.period) + " (" + std::to_string(v.usage) + " > " +
           std::to_string(v.capacity) + ")";
  }
  return msg.empty() ? "infeasible" : msg;
}

inline void check_labels_unique(const std::vector<std::string>& labels) {
  std::set<std::string> seen;
  for (const std::string& l : labels)
    if (!seen.insert(l).second)
      throw ValidationError("duplicate candidate label '" + l + "'; labels must be unique");
}

// Shared tail: simulate a prepared view and fill the risk record.
inline ScheduleRisk risk_from_view(const SimView& view, const RankOptions& opt,
                                   const DeviateSource& deviates) {
  ScheduleRisk out;
  out.label = view.label;
  out.feasible = true;
  const int t_f = static_cast<int>(std::llround(view.planned_makespan));
  const ControlGrid grid = ControlGrid::regular(t_f, opt.grid_step);
  const SrbSamples samples = simulate_totals(view, grid, opt.sim, deviates);
  out.curve = curve_from_samples(samples, view.label, opt.sim);
  out.planned = view.planned_makespan;
  out.mean = out.curve.points.front().mean;  // unconditional run: t = 0
  out.p10 = quantile(samples.totals.front(), 0.10);
  out.p50 = quantile(samples.totals.front(), 0.50);
  out.p90 = quantile(samples.totals.front(), 0.90);
  out.srv_value = srv(out.curve);
  return out;
}

inline void finish_ranking(RiskReport& report) {
  std::vector<const ScheduleRisk*> feasible;
  for (const ScheduleRisk& s : report.schedules)
    if (s.feasible) feasible.push_back(&s);
  std::sort(feasible.begin(), feasible.end(), [](const ScheduleRisk* a, const ScheduleRisk* b) {
    if (a->srv_value != b->srv_value) return a->srv_value < b->srv_value;
    return a->label < b->label;
  });
  for (const ScheduleRisk* s : feasible) report.ranking.push_back(s->label);
}

}  // namespace detail

/// Rank candidate schedules of one instance by ascending SRV. All
/// candidates share the duration model and the deviate table (common
/// random numbers), so SRV differences reflect the schedules, not the
/// draws. Infeasible candidates are kept in the report as rejected but
/// excluded from the ranking.
inline RiskReport rank_schedules(const ProjectInstance& inst, const std::vector<Schedule>& candidates,
                                 const DurationModel& model, const RankOptions& opt) {
  const DeviateSource deviates = counter_deviates(opt.sim.seed);
  std::vector<std::string> labels;
  for (const Schedule& s : candidates) labels.push_back(s.label);
  detail::check_labels_unique(labels);

  RiskReport report;
  for (const Schedule& s : candidates) {
    if (s.instance_name != inst.name)
      throw ValidationError("candidate '" + s.label + "' is for project '" + s.instance_name +
                            "', not for '" + inst.name + "'");
    const FeasibilityReport feas = validate(s, inst);
    if (!feas.feasible) {
      ScheduleRisk rejected;
      rejected.label = s.label;
      rejected.feasible = false;
      rejected.rejection = detail::rejection_summary(feas);
      report.schedules.push_back(std::move(rejected));
      continue;
    }
    report.schedules.push_back(detail::risk_from_view(build_simview(inst, s, model), opt, deviates));
  }
  detail::finish_ranking(report);
  return report;
}

/// A bundle candidate: one schedule per project under a shared label.
struct BundleCandidate {
  std::string label;
  std::vector<Schedule> schedules;
};

/// Rank candidate schedule sets of a multi-project bundle.
inline RiskReport rank_schedules(const MultiProjectProblem& prob,
                                 const std::vector<BundleCandidate>& candidates,
                                 const DurationModel& model, const RankOptions& opt) {
  const DeviateSource deviates = counter_deviates(opt.sim.seed);
  std::vector<std::string> labels;
  for (const BundleCandidate& c : candidates) labels.push_back(c.label);
  detail::check_labels_unique(labels);

  RiskReport report;
  for (const BundleCandidate& c : candidates) {
    const FeasibilityReport feas = validate(c.schedules, prob);
    if (!feas.feasible) {
      ScheduleRisk rejected;
      rejected.label = c.label;
      rejected.feasible = false;
      rejected.rejection = detail::rejection_summary(feas);
      report.schedules.push_back(std::move(rejected));
      continue;
    }
    report.schedules.push_back(
        detail::risk_from_view(build_simview(prob, c.schedules, model, c.label), opt, deviates));
  }
  detail::finish_ranking(report);
  return report;
}

}  // namespace schedrisk
