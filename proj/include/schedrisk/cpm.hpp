#pragma once

#include <algorithm>
#include <vector>

#include "schedrisk/types.hpp"

namespace schedrisk {

struct CpmResult {
  int makespan = 0;
  std::vector<int> earliest_start;  // by internal id
};

/// Earliest-start forward pass over the precedence DAG. The makespan is
/// the earliest finish of the sink.
inline CpmResult cpm_makespan(const ProjectInstance& inst) {
  const auto order = topological_order(inst);
  std::vector<int> es(inst.num_activities(), 0);
  for (int v : order) {
    const Activity& a = inst.activities[v];
    for (int s : a.successors) es[s] = std::max(es[s], es[v] + a.duration);
  }
  const int sink = inst.sink();
  return {es[sink] + inst.activities[sink].duration, std::move(es)};
}

/// Latest-start backward pass against a horizon (typically the CPM
/// makespan). slack = latest_start - earliest_start.
inline std::vector<int> latest_starts(const ProjectInstance& inst, int horizon) {
  const auto order = topological_order(inst);
  std::vector<int> ls(inst.num_activities(), 0);
  for (int i = 0; i < inst.num_activities(); ++i) ls[i] = horizon - inst.activities[i].duration;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Activity& a = inst.activities[*it];
    for (int s : a.successors) ls[*it] = std::min(ls[*it], ls[s] - a.duration);
  }
  return ls;
}

}  // namespace schedrisk
