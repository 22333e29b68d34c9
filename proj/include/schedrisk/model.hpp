#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "schedrisk/duration.hpp"
#include "schedrisk/errors.hpp"
#include "schedrisk/rng.hpp"
#include "schedrisk/types.hpp"

namespace schedrisk {

/// Uncertainty model for one or more projects: a DurationSpec per
/// activity, keyed by (project name, activity file id). The mean of
/// each spec is the planned duration from the instance file, so only
/// the family and the cv carry extra information.
struct DurationModel {
  // project name -> activity file id -> spec
  std::map<std::string, std::map<int, DurationSpec>> specs;

  const DurationSpec& at(const std::string& project, int file_id) const {
    auto p = specs.find(project);
    if (p == specs.end()) throw ValidationError("no duration model for project '" + project + "'");
    auto a = p->second.find(file_id);
    if (a == p->second.end())
      throw ValidationError("no duration spec for activity " + std::to_string(file_id) +
                            " of project '" + project + "'");
    return a->second;
  }
};

/// Options controlling how a model is generated from an instance.
struct ModelOptions {
  Family family = Family::lognormal;
  double cv_lo = 0.10;  // cv drawn once per activity, uniform on [cv_lo, cv_hi]
  double cv_hi = 0.30;
  std::uint64_t seed = 0;
};

inline void check_model_options(const ModelOptions& opt) {
  if (!(opt.cv_lo >= 0) || !(opt.cv_hi >= opt.cv_lo) || opt.cv_hi >= 1)
    throw std::domain_error("cv range must satisfy 0 <= lo <= hi < 1");
  DurationSpec probe{opt.family, 1.0, opt.cv_hi};
  check_spec(probe);  // rejects ranges outside the family's support bound
}

namespace detail {

// CVs depend only on (seed, activity file id): stable under re-parsing,
// re-ordering, and independent of how many replications are run.
inline std::map<int, DurationSpec> assign_specs(const ProjectInstance& inst,
                                                const ModelOptions& opt,
                                                std::uint64_t project_seed) {
  std::map<int, DurationSpec> out;
  for (const Activity& a : inst.activities) {
    DurationSpec spec;
    spec.mean = static_cast<double>(a.duration);
    if (a.duration == 0 || opt.family == Family::deterministic) {
      spec.family = Family::deterministic;
      spec.cv = 0;
    } else {
      spec.family = opt.family;
      spec.cv = uniform_hash(project_seed, static_cast<std::uint64_t>(a.file_id), opt.cv_lo, opt.cv_hi);
      check_spec(spec);
    }
    out.emplace(a.file_id, spec);
  }
  return out;
}

}  // namespace detail

/// Build a model for a single instance.
inline DurationModel build_model(const ProjectInstance& inst, const ModelOptions& opt) {
  check_model_options(opt);
  DurationModel m;
  m.specs.emplace(inst.name, detail::assign_specs(inst, opt, opt.seed));
  return m;
}

/// Build a model for every project in a bundle. Each project gets its
/// own sub-seed derived from its ordinal so the cv streams do not
/// collide across projects sharing activity ids.
inline DurationModel build_model(const MultiProjectProblem& prob, const ModelOptions& opt) {
  check_model_options(opt);
  DurationModel m;
  std::uint64_t ordinal = 0;
  for (const ProjectEntry& entry : prob.projects) {
    const std::uint64_t sub = hash_mix(opt.seed, 0x9e3779b97f4a7c15ull + ordinal);
    m.specs.emplace(entry.name, detail::assign_specs(entry.instance, opt, sub));
    ++ordinal;
  }
  return m;
}

/// JSON layout:
/// { "projects": { "<name>": { "<file_id>": {"family": "...", "mean": m, "cv": c}, ... } } }
inline void write_model(std::ostream& os, const DurationModel& model) {
  nlohmann::ordered_json root;
  auto& projects = root["projects"];
  projects = nlohmann::ordered_json::object();
  for (const auto& [name, acts] : model.specs) {
    auto& pj = projects[name];
    pj = nlohmann::ordered_json::object();
    for (const auto& [file_id, spec] : acts) {
      auto& sj = pj[std::to_string(file_id)];
      sj["family"] = family_name(spec.family);
      sj["mean"] = spec.mean;
      sj["cv"] = spec.cv;
    }
  }
  os << root.dump(2) << '\n';
}

inline DurationModel read_model(std::istream& is) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("projects") || !root["projects"].is_object())
    throw ParseError("model file must contain a 'projects' object");
  DurationModel m;
  for (const auto& [name, pj] : root["projects"].items()) {
    if (!pj.is_object()) throw ParseError("model entry for '" + name + "' must be an object");
    auto& acts = m.specs[name];
    for (const auto& [key, sj] : pj.items()) {
      int file_id = 0;
      try {
        file_id = std::stoi(key);
      } catch (const std::exception&) {
        throw ParseError("model activity key '" + key + "' is not an integer");
      }
      DurationSpec spec;
      try {
        spec.family = family_from_name(sj.at("family").get<std::string>());
        spec.mean = sj.at("mean").get<double>();
        spec.cv = sj.at("cv").get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad spec for activity " + key + " of '" + name + "': " + e.what());
      } catch (const std::domain_error& e) {
        throw ParseError("bad spec for activity " + key + " of '" + name + "': " + e.what());
      }
      try {
        check_spec(spec);
      } catch (const std::domain_error& e) {
        throw ValidationError("activity " + key + " of '" + name + "': " + e.what());
      }
      acts.emplace(file_id, spec);
    }
  }
  return m;
}

/// Cross-check a model against the instances it will drive: every
/// activity must have a spec whose mean equals its planned duration.
inline void check_model(const DurationModel& model, const ProjectInstance& inst) {
  for (const Activity& a : inst.activities) {
    const DurationSpec& spec = model.at(inst.name, a.file_id);
    if (spec.mean != static_cast<double>(a.duration))
      throw ValidationError("model mean " + std::to_string(spec.mean) + " for activity " +
                            std::to_string(a.file_id) + " of '" + inst.name +
                            "' does not match the planned duration " + std::to_string(a.duration));
  }
}

inline void check_model(const DurationModel& model, const MultiProjectProblem& prob) {
  for (const ProjectEntry& entry : prob.projects) check_model(model, entry.instance);
}

}  // namespace schedrisk
