#pragma once

#include <cctype>
#include <charconv>
#include <iomanip>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "schedrisk/errors.hpp"
#include "schedrisk/types.hpp"

namespace schedrisk {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline int parse_int(std::string_view tok, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + std::string(tok) + "'", line);
  return v;
}

// Value tokens after the first ':' on a header line.
inline std::vector<std::string_view> after_colon(std::string_view line, int lineno) {
  const auto pos = line.find(':');
  if (pos == std::string_view::npos) throw ParseError("expected ':' on header line", lineno);
  return split_ws(line.substr(pos + 1));
}

}  // namespace detail

/// Parse a PSPLib single-mode `.sm` project file.
///
/// Sections are recognized in order: header (jobs, horizon, RESOURCES),
/// PROJECT INFORMATION, PRECEDENCE RELATIONS, REQUESTS/DURATIONS,
/// RESOURCEAVAILABILITIES, closed by a final separator line. The horizon
/// and project-information rows are read and discarded. Non-renewable or
/// doubly-constrained resource declarations and multi-mode jobs are
/// rejected as unsupported.
inline ProjectInstance parse_instance(std::istream& in) {
  using detail::after_colon;
  using detail::parse_int;
  using detail::split_ws;
  using detail::trim;

  enum class S {
    header,
    project_info_head,
    project_info_row,
    prec_head,
    prec_rows,
    req_head,
    req_rows,
    avail_head,
    avail_row,
    trailer,
    done
  };

  S state = S::header;
  int lineno = 0;
  int jobs = -1;
  int renewables = -1;
  std::string name;

  struct PrecRow {
    int nsucc;
    std::vector<int> succ_file_ids;
  };
  std::vector<PrecRow> prec;
  struct ReqRow {
    int duration;
    std::vector<int> demands;
  };
  std::vector<ReqRow> reqs;
  std::vector<int> capacities;

  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.starts_with("---")) continue;
    if (line.starts_with("***")) {
      if (state == S::trailer) state = S::done;
      continue;
    }

    // Section labels advance the state machine regardless of position;
    // arriving from the wrong state is a structural error.
    if (line.starts_with("PROJECT INFORMATION")) {
      if (state != S::header) throw ParseError("unexpected PROJECT INFORMATION section", lineno);
      state = S::project_info_head;
      continue;
    }
    if (line.starts_with("PRECEDENCE RELATIONS")) {
      if (state != S::header && state != S::project_info_row && state != S::project_info_head)
        throw ParseError("unexpected PRECEDENCE RELATIONS section", lineno);
      if (jobs < 0) throw ParseError("job count missing before PRECEDENCE RELATIONS", lineno);
      if (renewables < 0) throw ParseError("RESOURCES block missing before PRECEDENCE RELATIONS", lineno);
      state = S::prec_head;
      continue;
    }
    if (line.starts_with("REQUESTS/DURATIONS")) {
      if (state != S::prec_rows || static_cast<int>(prec.size()) != jobs)
        throw ParseError("REQUESTS/DURATIONS before all precedence rows were read", lineno);
      state = S::req_head;
      continue;
    }
    if (line.starts_with("RESOURCEAVAILABILITIES")) {
      if (state != S::req_rows || static_cast<int>(reqs.size()) != jobs)
        throw ParseError("RESOURCEAVAILABILITIES before all request rows were read", lineno);
      state = renewables == 0 ? S::trailer : S::avail_head;
      continue;
    }

    switch (state) {
      case S::header: {
        if (line.starts_with("file with basedata")) {
          const auto vals = after_colon(line, lineno);
          if (!vals.empty()) {
            name = std::string(vals[0]);
            if (name.size() >= 4) {
              std::string suffix = name.substr(name.size() - 4);
              for (char& ch : suffix) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
              if (suffix == ".bas") name.resize(name.size() - 4);
            }
          }
        } else if (line.starts_with("initial value random generator")) {
          // not used
        } else if (line.starts_with("projects")) {
          const auto vals = after_colon(line, lineno);
          if (vals.empty() || parse_int(vals[0], lineno) != 1)
            throw ValidationError("unsupported: .sm file must declare exactly 1 project (line " +
                                  std::to_string(lineno) + ")");
        } else if (line.starts_with("jobs")) {
          const auto vals = after_colon(line, lineno);
          if (vals.empty()) throw ParseError("missing job count", lineno);
          jobs = parse_int(vals[0], lineno);
          if (jobs < 2) throw ParseError("job count must be at least 2 (source and sink)", lineno);
        } else if (line.starts_with("horizon")) {
          const auto vals = after_colon(line, lineno);
          if (vals.empty()) throw ParseError("missing horizon value", lineno);
          parse_int(vals[0], lineno);  // parsed, ignored
        } else if (line == "RESOURCES") {
          // subsection labels follow
        } else if (line.starts_with("- renewable")) {
          const auto vals = after_colon(line, lineno);
          if (vals.empty()) throw ParseError("missing renewable resource count", lineno);
          renewables = parse_int(vals[0], lineno);
          if (renewables < 0) throw ParseError("negative renewable resource count", lineno);
        } else if (line.starts_with("- nonrenewable")) {
          const auto vals = after_colon(line, lineno);
          if (vals.empty()) throw ParseError("missing nonrenewable resource count", lineno);
          if (parse_int(vals[0], lineno) != 0)
            throw ValidationError("unsupported: nonrenewable resources (line " + std::to_string(lineno) + ")");
        } else if (line.starts_with("- doubly constrained")) {
          const auto vals = after_colon(line, lineno);
          if (vals.empty()) throw ParseError("missing doubly-constrained resource count", lineno);
          if (parse_int(vals[0], lineno) != 0)
            throw ValidationError("unsupported: doubly constrained resources (line " +
                                  std::to_string(lineno) + ")");
        } else {
          throw ParseError("unrecognized header line '" + std::string(line) + "'", lineno);
        }
        break;
      }
      case S::project_info_head: {
        if (!line.starts_with("pronr"))
          throw ParseError("expected 'pronr.' column header", lineno);
        state = S::project_info_row;
        break;
      }
      case S::project_info_row: {
        const auto toks = split_ws(line);
        if (toks.size() < 2) throw ParseError("malformed project information row", lineno);
        for (const auto& t : toks) parse_int(t, lineno);
        break;
      }
      case S::prec_head: {
        if (!line.starts_with("jobnr")) throw ParseError("expected 'jobnr.' column header", lineno);
        state = S::prec_rows;
        break;
      }
      case S::prec_rows: {
        const auto toks = split_ws(line);
        if (toks.size() < 3) throw ParseError("malformed precedence row", lineno);
        const int jobnr = parse_int(toks[0], lineno);
        if (jobnr != static_cast<int>(prec.size()) + 1) {
          if (jobnr >= 1 && jobnr <= static_cast<int>(prec.size()))
            throw ValidationError("duplicate activity id " + std::to_string(jobnr) + " (line " +
                                  std::to_string(lineno) + ")");
          throw ParseError("expected job " + std::to_string(prec.size() + 1) + ", got " +
                               std::to_string(jobnr),
                           lineno);
        }
        if (jobnr > jobs) throw ParseError("more precedence rows than declared jobs", lineno);
        if (parse_int(toks[1], lineno) != 1)
          throw ValidationError("unsupported: multi-mode job " + std::to_string(jobnr) + " (line " +
                                std::to_string(lineno) + ")");
        const int nsucc = parse_int(toks[2], lineno);
        if (nsucc < 0 || static_cast<int>(toks.size()) != 3 + nsucc)
          throw ParseError("successor count does not match row length", lineno);
        PrecRow row{nsucc, {}};
        for (int k = 0; k < nsucc; ++k) row.succ_file_ids.push_back(parse_int(toks[3 + k], lineno));
        prec.push_back(std::move(row));
        break;
      }
      case S::req_head: {
        if (!line.starts_with("jobnr")) throw ParseError("expected 'jobnr.' column header", lineno);
        state = S::req_rows;
        break;
      }
      case S::req_rows: {
        const auto toks = split_ws(line);
        if (static_cast<int>(toks.size()) != 3 + renewables)
          throw ParseError("request row must have mode, duration and " + std::to_string(renewables) +
                               " demands",
                           lineno);
        const int jobnr = parse_int(toks[0], lineno);
        if (jobnr != static_cast<int>(reqs.size()) + 1) {
          if (jobnr >= 1 && jobnr <= static_cast<int>(reqs.size()))
            throw ValidationError("duplicate activity id " + std::to_string(jobnr) + " (line " +
                                  std::to_string(lineno) + ")");
          throw ParseError("expected job " + std::to_string(reqs.size() + 1) + ", got " +
                               std::to_string(jobnr),
                           lineno);
        }
        if (jobnr > jobs) throw ParseError("more request rows than declared jobs", lineno);
        if (parse_int(toks[1], lineno) != 1)
          throw ValidationError("unsupported: multi-mode job " + std::to_string(jobnr) + " (line " +
                                std::to_string(lineno) + ")");
        ReqRow row;
        row.duration = parse_int(toks[2], lineno);
        if (row.duration < 0) throw ParseError("negative duration", lineno);
        for (int k = 0; k < renewables; ++k) row.demands.push_back(parse_int(toks[3 + k], lineno));
        reqs.push_back(std::move(row));
        break;
      }
      case S::avail_head: {
        if (!line.starts_with("R")) throw ParseError("expected resource column header", lineno);
        state = S::avail_row;
        break;
      }
      case S::avail_row: {
        const auto toks = split_ws(line);
        if (static_cast<int>(toks.size()) != renewables)
          throw ParseError("expected " + std::to_string(renewables) + " capacities", lineno);
        for (const auto& t : toks) capacities.push_back(parse_int(t, lineno));
        state = S::trailer;
        break;
      }
      case S::trailer:
      case S::done:
        throw ParseError("unexpected content after RESOURCEAVAILABILITIES", lineno);
    }
  }

  if (state != S::done) {
    static const char* names[] = {"header",
                                  "PROJECT INFORMATION",
                                  "PROJECT INFORMATION",
                                  "PRECEDENCE RELATIONS",
                                  "PRECEDENCE RELATIONS",
                                  "REQUESTS/DURATIONS",
                                  "REQUESTS/DURATIONS",
                                  "RESOURCEAVAILABILITIES",
                                  "RESOURCEAVAILABILITIES",
                                  "trailer"};
    throw ParseError(std::string("unexpected end of file in ") + names[static_cast<int>(state)], lineno);
  }
  ProjectInstance inst;
  inst.name = name;
  inst.resources.reserve(renewables);
  for (int r = 0; r < renewables; ++r) inst.resources.push_back({r, capacities[r]});
  inst.activities.reserve(jobs);
  for (int i = 0; i < jobs; ++i) {
    Activity a;
    a.id = i;
    a.file_id = i + 1;
    a.duration = reqs[i].duration;
    a.demands = reqs[i].demands;
    for (int s : prec[i].succ_file_ids) {
      if (s < 1 || s > jobs)
        throw ValidationError("activity " + std::to_string(i + 1) + " references unknown successor " +
                              std::to_string(s));
      a.successors.push_back(s - 1);
    }
    inst.activities.push_back(std::move(a));
  }
  check_instance(inst);
  return inst;
}

inline ProjectInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

/// Serialize an instance in the PSPLib `.sm` layout. The horizon is
/// written as the sum of durations; parse(write(x)) == x field for field.
inline std::string write_instance(const ProjectInstance& inst) {
  std::ostringstream out;
  const std::string rule(72, '*');
  const int jobs = inst.num_activities();
  const int nres = inst.num_resources();
  const int horizon =
      std::accumulate(inst.activities.begin(), inst.activities.end(), 0,
                      [](int acc, const Activity& a) { return acc + a.duration; });

  out << rule << "\n";
  out << "file with basedata            : " << inst.name << ".bas\n";
  out << "initial value random generator: 0\n";
  out << rule << "\n";
  out << "projects                      :  1\n";
  out << "jobs (incl. supersource/sink ):  " << jobs << "\n";
  out << "horizon                       :  " << horizon << "\n";
  out << "RESOURCES\n";
  out << "  - renewable                 :  " << nres << "   R\n";
  out << "  - nonrenewable              :  0   N\n";
  out << "  - doubly constrained        :  0   D\n";
  out << rule << "\n";
  out << "PROJECT INFORMATION:\n";
  out << "pronr.  #jobs rel.date duedate tardcost  MPM-Time\n";
  out << std::setw(5) << 1 << std::setw(7) << jobs - 2 << std::setw(9) << 0 << std::setw(8) << horizon
      << std::setw(9) << 0 << std::setw(10) << horizon << "\n";
  out << rule << "\n";
  out << "PRECEDENCE RELATIONS:\n";
  out << "jobnr.    #modes  #successors   successors\n";
  for (const Activity& a : inst.activities) {
    out << std::setw(4) << a.file_id << std::setw(9) << 1 << std::setw(13) << a.successors.size() << "  ";
    for (int s : a.successors) out << std::setw(4) << inst.activities[s].file_id;
    out << "\n";
  }
  out << rule << "\n";
  out << "REQUESTS/DURATIONS:\n";
  out << "jobnr. mode duration";
  for (int r = 0; r < nres; ++r) out << "  R " << r + 1;
  out << "\n";
  out << std::string(72, '-') << "\n";
  for (const Activity& a : inst.activities) {
    out << std::setw(4) << a.file_id << std::setw(7) << 1 << std::setw(9) << a.duration << "  ";
    for (int d : a.demands) out << std::setw(5) << d;
    out << "\n";
  }
  out << rule << "\n";
  out << "RESOURCEAVAILABILITIES:\n";
  for (int r = 0; r < nres; ++r) out << "  R " << r + 1;
  out << "\n";
  for (const Resource& r : inst.resources) out << std::setw(5) << r.capacity;
  out << "\n";
  out << rule << "\n";
  return out.str();
}

}  // namespace schedrisk
