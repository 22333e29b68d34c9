#pragma once

#include <functional>
#include <istream>
#include <sstream>
#include <string>

#include "schedrisk/errors.hpp"
#include "schedrisk/psplib.hpp"
#include "schedrisk/types.hpp"

namespace schedrisk {

/// Maps an instance path from a descriptor line to the instance text.
/// The CLI resolves paths relative to the descriptor file; tests supply
/// in-memory fixtures.
using InstanceResolver = std::function<std::string(const std::string& path)>;

/// Parse a multi-project descriptor:
///
///   # comment
///   project <name> <instance-path> <arrival>
///   global <resource-id> <capacity>
///
/// Resource ids are 1-based in the text (R1, R2, ...) and 0-based
/// internally, matching the activity-id normalization.
inline MultiProjectProblem parse_multiproject(std::istream& in, const InstanceResolver& resolver,
                                              const std::string& problem_name = "") {
  using detail::parse_int;
  using detail::split_ws;
  using detail::trim;

  MultiProjectProblem prob;
  prob.name = problem_name;

  int lineno = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto toks = split_ws(line);
    if (toks[0] == "project") {
      if (toks.size() != 4) throw ParseError("expected 'project <name> <instance-path> <arrival>'", lineno);
      ProjectEntry entry;
      entry.name = std::string(toks[1]);
      entry.instance_path = std::string(toks[2]);
      entry.arrival = parse_int(toks[3], lineno);
      if (entry.arrival < 0)
        throw ParseError("negative arrival date for project '" + entry.name + "'", lineno);
      std::string text;
      try {
        text = resolver(entry.instance_path);
      } catch (const std::exception& e) {
        throw ParseError("cannot resolve instance '" + entry.instance_path + "': " + e.what(), lineno);
      }
      entry.instance = parse_instance(text);
      prob.projects.push_back(std::move(entry));
    } else if (toks[0] == "global") {
      if (toks.size() != 3) throw ParseError("expected 'global <resource-id> <capacity>'", lineno);
      const int rid = parse_int(toks[1], lineno);
      const int cap = parse_int(toks[2], lineno);
      if (rid < 1) throw ParseError("resource ids are 1-based", lineno);
      if (prob.global_capacity.count(rid - 1))
        throw ParseError("duplicate global resource " + std::to_string(rid), lineno);
      prob.global_capacity[rid - 1] = cap;
    } else {
      throw ParseError("unrecognized directive '" + std::string(toks[0]) + "'", lineno);
    }
  }
  check_problem(prob);
  return prob;
}

inline MultiProjectProblem parse_multiproject(const std::string& text, const InstanceResolver& resolver,
                                              const std::string& problem_name = "") {
  std::istringstream in(text);
  return parse_multiproject(in, resolver, problem_name);
}

inline std::string write_multiproject(const MultiProjectProblem& prob) {
  std::ostringstream out;
  for (const ProjectEntry& p : prob.projects)
    out << "project " << p.name << " " << p.instance_path << " " << p.arrival << "\n";
  for (const auto& [rid, cap] : prob.global_capacity) out << "global " << rid + 1 << " " << cap << "\n";
  return out.str();
}

}  // namespace schedrisk
