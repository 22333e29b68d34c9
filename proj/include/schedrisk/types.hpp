#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "schedrisk/errors.hpp"

namespace schedrisk {

/// One project activity. Ids are normalized to 0-based contiguous integers;
/// the id found in the source file is kept for reporting and schedule files.
struct Activity {
  int id = 0;       // internal, 0-based, equals position in ProjectInstance
  int file_id = 0;  // id as written in the source file (PSPLib: 1-based)
  int duration = 0;
  std::vector<int> demands;     // one entry per instance resource
  std::vector<int> successors;  // internal ids

  bool operator==(const Activity&) const = default;
};

struct Resource {
  int id = 0;  // internal, 0-based
  int capacity = 0;

  bool operator==(const Resource&) const = default;
};

/// A single-project instance: activities in id order with the PSPLib
/// convention of a dummy source first and a dummy sink last.
struct ProjectInstance {
  std::string name;
  std::vector<Activity> activities;
  std::vector<Resource> resources;

  bool operator==(const ProjectInstance&) const = default;

  int source() const { return 0; }
  int sink() const { return static_cast<int>(activities.size()) - 1; }
  int num_activities() const { return static_cast<int>(activities.size()); }
  int num_resources() const { return static_cast<int>(resources.size()); }

  const Activity* by_file_id(int fid) const {
    for (const Activity& a : activities)
      if (a.file_id == fid) return &a;
    return nullptr;
  }

  std::vector<std::vector<int>> predecessor_lists() const {
    std::vector<std::vector<int>> preds(activities.size());
    for (const Activity& a : activities)
      for (int s : a.successors) preds[s].push_back(a.id);
    return preds;
  }
};

/// Kahn topological order over the precedence graph, smallest id first
/// among the ready activities. Throws ValidationError on cycles.
inline std::vector<int> topological_order(const ProjectInstance& inst) {
  const int n = inst.num_activities();
  std::vector<int> indeg(n, 0);
  for (const Activity& a : inst.activities)
    for (int s : a.successors) ++indeg[s];

  std::vector<int> ready;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);

  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    int v = *it;
    ready.erase(it);
    order.push_back(v);
    for (int s : inst.activities[v].successors)
      if (--indeg[s] == 0) ready.push_back(s);
  }
  if (static_cast<int>(order.size()) != n)
    throw ValidationError("precedence graph of '" + inst.name + "' contains a cycle");
  return order;
}

/// Full structural check of a parsed or constructed instance.
inline void check_instance(const ProjectInstance& inst) {
  const int n = inst.num_activities();
  if (n < 2) throw ValidationError("instance '" + inst.name + "' needs at least source and sink");
  const int r = inst.num_resources();

  std::vector<char> file_seen;
  for (int i = 0; i < n; ++i) {
    const Activity& a = inst.activities[i];
    if (a.id != i) throw ValidationError("activity ids are not contiguous 0-based");
    if (a.duration < 0) throw ValidationError("negative duration on activity " + std::to_string(a.file_id));
    if (static_cast<int>(a.demands.size()) != r)
      throw ValidationError("activity " + std::to_string(a.file_id) + " has " +
                            std::to_string(a.demands.size()) + " demands for " + std::to_string(r) +
                            " resources");
    for (int d : a.demands)
      if (d < 0) throw ValidationError("negative demand on activity " + std::to_string(a.file_id));
    for (int s : a.successors)
      if (s < 0 || s >= n)
        throw ValidationError("activity " + std::to_string(a.file_id) + " references unknown successor");
    if (a.file_id >= 0) {
      if (a.file_id >= static_cast<int>(file_seen.size())) file_seen.resize(a.file_id + 1, 0);
      if (file_seen[a.file_id]++)
        throw ValidationError("duplicate activity id " + std::to_string(a.file_id));
    }
  }
  for (const Resource& res : inst.resources)
    if (res.capacity < 0) throw ValidationError("negative capacity on resource " + std::to_string(res.id + 1));

  // Dummy conventions: source/sink with duration 0 and no demands.
  auto is_dummy = [&](const Activity& a) {
    return a.duration == 0 && std::all_of(a.demands.begin(), a.demands.end(), [](int d) { return d == 0; });
  };
  if (!is_dummy(inst.activities.front()))
    throw ValidationError("source activity must have duration 0 and zero demands");
  if (!is_dummy(inst.activities.back()))
    throw ValidationError("sink activity must have duration 0 and zero demands");

  // Exactly one source (no predecessors) and one sink (no successors).
  std::vector<int> indeg(n, 0);
  for (const Activity& a : inst.activities)
    for (int s : a.successors) ++indeg[s];
  for (int i = 0; i < n; ++i) {
    if (indeg[i] == 0 && i != inst.source())
      throw ValidationError("activity " + std::to_string(inst.activities[i].file_id) +
                            " has no predecessors; expected a single source");
    if (inst.activities[i].successors.empty() && i != inst.sink())
      throw ValidationError("activity " + std::to_string(inst.activities[i].file_id) +
                            " has no successors; expected a single sink");
  }
  if (indeg[inst.source()] != 0) throw ValidationError("source activity has predecessors");
  if (!inst.activities[inst.sink()].successors.empty())
    throw ValidationError("sink activity has successors");

  topological_order(inst);  // throws on cycles
}

/// Whether an internal activity id denotes one of the two dummies.
inline bool is_dummy_id(const ProjectInstance& inst, int id) {
  return id == inst.source() || id == inst.sink();
}

/// One project of a multi-project problem.
struct ProjectEntry {
  std::string name;           // unique within the problem
  std::string instance_path;  // as written in the descriptor
  ProjectInstance instance;
  int arrival = 0;

  bool operator==(const ProjectEntry&) const = default;
};

/// MPSPLib-style bundle: several single-project instances with arrival
/// dates and a set of shared (global) resource capacities. A resource id
/// present in global_capacity is pooled across projects; all other
/// resources keep their per-project capacities.
struct MultiProjectProblem {
  std::string name;
  std::vector<ProjectEntry> projects;
  std::map<int, int> global_capacity;  // internal resource id -> capacity

  bool operator==(const MultiProjectProblem&) const = default;

  int num_projects() const { return static_cast<int>(projects.size()); }

  const ProjectEntry* by_name(const std::string& project) const {
    for (const ProjectEntry& p : projects)
      if (p.name == project) return &p;
    return nullptr;
  }
};

inline void check_problem(const MultiProjectProblem& prob) {
  if (prob.projects.empty()) throw ValidationError("problem '" + prob.name + "' has no projects");
  std::vector<std::string> names;
  for (const ProjectEntry& p : prob.projects) {
    if (p.arrival < 0)
      throw ValidationError("project '" + p.name + "' has a negative arrival date");
    if (std::find(names.begin(), names.end(), p.name) != names.end())
      throw ValidationError("duplicate project name '" + p.name + "'");
    names.push_back(p.name);
    check_instance(p.instance);
  }
  for (const auto& [rid, cap] : prob.global_capacity) {
    if (cap < 0) throw ValidationError("negative capacity on global resource " + std::to_string(rid + 1));
    bool referenced = false;
    for (const ProjectEntry& p : prob.projects)
      if (rid >= 0 && rid < p.instance.num_resources()) referenced = true;
    if (!referenced)
      throw ValidationError("global resource " + std::to_string(rid + 1) +
                            " is not referenced by any project");
  }
}

/// Planned start times for the non-dummy activities of one project.
/// Keys are file ids (the external currency of schedule files); dummy
/// starts are derived where needed: source at the minimum start, sink at
/// the maximum finish.
struct Schedule {
  std::string instance_name;  // project name this schedule belongs to
  std::string label;          // originating method, file stem, ...
  std::map<int, int> starts;  // activity file id -> planned start

  bool operator==(const Schedule&) const = default;
};

}  // namespace schedrisk
