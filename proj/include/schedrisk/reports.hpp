#pragma once

#include <charconv>
#include <ostream>
#include <string>

#include <json.hpp>

#include "schedrisk/feasibility.hpp"
#include "schedrisk/model.hpp"
#include "schedrisk/rank.hpp"
#include "schedrisk/srb.hpp"

namespace schedrisk {

/// Shortest decimal form that round-trips the exact double — keeps CSV
/// output compact and byte-stable across runs.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Curve CSV: one `t,variance,mean,sd` row per control time.
inline void write_curve_csv(std::ostream& os, const SRBCurve& curve) {
  os << "t,variance,mean,sd\n";
  for (const SRBPoint& p : curve.points)
    os << p.t << ',' << format_double(p.variance) << ',' << format_double(p.mean) << ','
       << format_double(p.sd) << '\n';
}

/// Run metadata recorded in every report so the run can be reproduced
/// exactly from the report plus the model sidecar.
struct RunMeta {
  std::uint64_t seed = 0;
  int replications = 10000;
  Family family = Family::lognormal;
  double cv_lo = 0.10;
  double cv_hi = 0.30;
  StartPolicy start_policy = StartPolicy::ready_time;
  OngoingPolicy ongoing_policy = OngoingPolicy::scaled_sd;
  int grid_step = 1;
};

inline nlohmann::ordered_json risk_report_json(const RiskReport& report, const RunMeta& meta) {
  nlohmann::ordered_json root;
  root["schema"] = 1;
  auto& run = root["run"];
  run["seed"] = meta.seed;
  run["replications"] = meta.replications;
  run["family"] = family_name(meta.family);
  run["cv_range"] = {meta.cv_lo, meta.cv_hi};
  run["policies"]["start"] = start_policy_name(meta.start_policy);
  run["policies"]["ongoing"] = ongoing_policy_name(meta.ongoing_policy);
  run["grid_step"] = meta.grid_step;
  auto& schedules = root["schedules"];
  schedules = nlohmann::ordered_json::array();
  for (const ScheduleRisk& s : report.schedules) {
    nlohmann::ordered_json sj;
    sj["label"] = s.label;
    if (s.feasible) {
      sj["planned"] = s.planned;
      sj["mean"] = s.mean;
      sj["p10"] = s.p10;
      sj["p50"] = s.p50;
      sj["p90"] = s.p90;
      sj["srv"] = s.srv_value;
      sj["feasible"] = true;
    } else {
      sj["planned"] = nullptr;
      sj["mean"] = nullptr;
      sj["p10"] = nullptr;
      sj["p50"] = nullptr;
      sj["p90"] = nullptr;
      sj["srv"] = nullptr;
      sj["feasible"] = false;
      sj["rejection"] = s.rejection;
    }
    schedules.push_back(std::move(sj));
  }
  root["ranking"] = report.ranking;
  return root;
}

/// Feasibility report as JSON (used by the validate command).
inline nlohmann::ordered_json feasibility_json(const std::string& name,
                                               const FeasibilityReport& rep) {
  nlohmann::ordered_json root;
  root["schedule"] = name;
  root["feasible"] = rep.feasible;
  auto& prec = root["precedence_violations"];
  prec = nlohmann::ordered_json::array();
  for (const PrecedenceViolation& v : rep.precedence_violations) {
    nlohmann::ordered_json vj;
    vj["project"] = v.project;
    vj["predecessor"] = v.pred_file_id;
    vj["successor"] = v.succ_file_id;
    vj["gap"] = v.gap;
    prec.push_back(std::move(vj));
  }
  auto& res = root["resource_violations"];
  res = nlohmann::ordered_json::array();
  for (const ResourceViolation& v : rep.resource_violations) {
    nlohmann::ordered_json vj;
    vj["project"] = v.project;
    vj["resource"] = v.resource_id;
    vj["period"] = v.period;
    vj["usage"] = v.usage;
    vj["capacity"] = v.capacity;
    res.push_back(std::move(vj));
  }
  return root;
}

}  // namespace schedrisk
