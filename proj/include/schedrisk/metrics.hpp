#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "schedrisk/cpm.hpp"
#include "schedrisk/feasibility.hpp"
#include "schedrisk/types.hpp"

namespace schedrisk {

/// MPSPLib-style comparison metrics for a multi-project schedule set.
/// Each project's delay is measured against its own resource-free CPM
/// makespan offset by the arrival date; DPD is the sample standard
/// deviation (divisor n-1) of those delays.
struct MultiProjectMetrics {
  int tms = 0;      // max project finish - min arrival
  double apd = 0;   // mean project delay
  double dpd = 0;   // sample standard deviation of project delays
  std::vector<double> delays;  // per project, in problem order
};

inline MultiProjectMetrics multiproject_metrics(const std::vector<Schedule>& schedules,
                                                const MultiProjectProblem& prob) {
  MultiProjectMetrics m;
  int max_finish = 0;
  int min_arrival = prob.projects.empty() ? 0 : prob.projects.front().arrival;

  for (const ProjectEntry& p : prob.projects) {
    auto it = std::find_if(schedules.begin(), schedules.end(),
                           [&](const Schedule& s) { return s.instance_name == p.name; });
    if (it == schedules.end())
      throw ValidationError("missing schedule for project '" + p.name + "'");
    const auto rs = detail::resolve_starts(*it, p.instance, p.arrival);
    const int cpm = cpm_makespan(p.instance).makespan;
    m.delays.push_back(static_cast<double>(rs.max_finish - p.arrival) - cpm);
    max_finish = std::max(max_finish, rs.max_finish);
    min_arrival = std::min(min_arrival, p.arrival);
  }

  m.tms = max_finish - min_arrival;
  const int n = static_cast<int>(m.delays.size());
  double sum = 0;
  for (double d : m.delays) sum += d;
  m.apd = n > 0 ? sum / n : 0.0;
  if (n >= 2) {
    double ssd = 0;
    for (double d : m.delays) ssd += (d - m.apd) * (d - m.apd);
    m.dpd = std::sqrt(ssd / (n - 1));
  }
  return m;
}

}  // namespace schedrisk
