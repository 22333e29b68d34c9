#pragma once

#include <algorithm>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "schedrisk/errors.hpp"
#include "schedrisk/psplib.hpp"  // detail::trim / split helpers
#include "schedrisk/types.hpp"

namespace schedrisk {

/// Parse the canonical schedule CSV: header `project,activity,start`,
/// one record per non-dummy activity, grouped into one Schedule per
/// project. Activity ids are file ids; associating them with an instance
/// happens at validation time, not here.
inline std::vector<Schedule> parse_schedules(std::istream& in, const std::string& label = "") {
  using detail::parse_int;
  using detail::trim;

  auto split_csv = [](std::string_view line) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
      const size_t pos = line.find(',', start);
      if (pos == std::string_view::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    return fields;
  };

  int lineno = 0;
  std::string raw;
  bool header_seen = false;
  std::vector<Schedule> out;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      auto fields = split_csv(line);
      if (fields.size() != 3 || trim(fields[0]) != "project" || trim(fields[1]) != "activity" ||
          trim(fields[2]) != "start")
        throw ParseError("expected header 'project,activity,start'", lineno);
      header_seen = true;
      continue;
    }
    auto fields = split_csv(line);
    if (fields.size() != 3) throw ParseError("expected 3 comma-separated fields", lineno);
    const std::string project(trim(fields[0]));
    if (project.empty()) throw ParseError("empty project field", lineno);
    const int activity = parse_int(trim(fields[1]), lineno);
    const int start = parse_int(trim(fields[2]), lineno);
    if (start < 0)
      throw ParseError("negative start " + std::to_string(start) + " for activity " +
                           std::to_string(activity),
                       lineno);

    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Schedule& s) { return s.instance_name == project; });
    if (it == out.end()) {
      out.push_back(Schedule{project, label, {}});
      it = std::prev(out.end());
    }
    if (it->starts.count(activity))
      throw ParseError("duplicate record for project '" + project + "', activity " +
                           std::to_string(activity),
                       lineno);
    it->starts[activity] = start;
  }
  if (!header_seen) throw ParseError("empty schedule file: missing header", lineno);
  std::sort(out.begin(), out.end(),
            [](const Schedule& a, const Schedule& b) { return a.instance_name < b.instance_name; });
  return out;
}

inline std::vector<Schedule> parse_schedules(const std::string& text, const std::string& label = "") {
  std::istringstream in(text);
  return parse_schedules(in, label);
}

/// Single-project convenience: the file must contain exactly one project.
inline Schedule parse_schedule(const std::string& text, const std::string& label = "") {
  auto all = parse_schedules(text, label);
  if (all.size() != 1)
    throw ParseError("expected a single project in schedule file, found " + std::to_string(all.size()));
  return std::move(all.front());
}

/// Canonical form: header, then rows sorted by project name and activity
/// id, LF line endings. write(parse(s)) == canonical form of s.
inline std::string write_schedules(const std::vector<Schedule>& schedules) {
  std::vector<const Schedule*> ordered;
  ordered.reserve(schedules.size());
  for (const Schedule& s : schedules) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const Schedule* a, const Schedule* b) { return a->instance_name < b->instance_name; });

  std::ostringstream out;
  out << "project,activity,start\n";
  for (const Schedule* s : ordered)
    for (const auto& [activity, start] : s->starts)
      out << s->instance_name << "," << activity << "," << start << "\n";
  return out.str();
}

inline std::string write_schedule(const Schedule& schedule) { return write_schedules({schedule}); }

}  // namespace schedrisk
