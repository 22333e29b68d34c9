// Command-line front end: validate schedules, simulate risk curves,
// rank candidate schedules, and generate candidates when none exist.
//
//   schedrisk validate --instance X.sm --schedule S.csv ...
//   schedrisk rank     --instance X.sm --schedule A.csv --schedule B.csv --out results/
//   schedrisk curve    --instance X.sm --schedule A.csv --out results/
//   schedrisk sgs      --instance X.sm --rule min-slack --rule random:3 --out results/
//
// Exit codes: 0 success, 1 infeasible schedule / empty ranking,
// 2 parse or configuration error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <schedrisk/schedrisk.hpp>

namespace fs = std::filesystem;
using namespace schedrisk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitError = 2;

struct RunConfig {
  std::string instance;
  std::string bundle;
  std::vector<std::string> schedules;
  std::vector<std::string> sgs_rules;
  std::string family = "lognormal";
  double cv_lo = 0.10;
  double cv_hi = 0.30;
  std::uint64_t seed = 0;
  int replications = 10000;
  int grid_step = 1;
  std::string start_policy = "ready-time";
  std::string ongoing_policy = "scaled-sd";
  std::string out;
  std::string model_path;  // reuse a previously written model.json
  int threads = 1;
  bool plot = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << text;
}

// `--config run.json` is applied before flag parsing so that explicit
// flags override the file. The file mirrors the flag names.
void apply_config_file(RunConfig& cfg, const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("config '" + path + "' is not valid JSON: " + e.what());
  }
  auto str = [&](const char* key, std::string& into) {
    if (j.contains(key)) into = j.at(key).get<std::string>();
  };
  str("instance", cfg.instance);
  str("bundle", cfg.bundle);
  str("family", cfg.family);
  str("start_policy", cfg.start_policy);
  str("ongoing_policy", cfg.ongoing_policy);
  str("out", cfg.out);
  str("model", cfg.model_path);
  if (j.contains("schedules")) cfg.schedules = j.at("schedules").get<std::vector<std::string>>();
  if (j.contains("sgs")) cfg.sgs_rules = j.at("sgs").get<std::vector<std::string>>();
  if (j.contains("cv_lo")) cfg.cv_lo = j.at("cv_lo").get<double>();
  if (j.contains("cv_hi")) cfg.cv_hi = j.at("cv_hi").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
  if (j.contains("grid_step")) cfg.grid_step = j.at("grid_step").get<int>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--instance", cfg.instance, "single-project instance (.sm)");
  cmd->add_option("--bundle", cfg.bundle, "multi-project descriptor (.mp)");
  cmd->add_option("--schedule", cfg.schedules, "schedule CSV (repeatable; one candidate per file)");
  cmd->add_option("--out", cfg.out, "output directory");
}

void add_sim_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--sgs", cfg.sgs_rules, "generate a candidate with this priority rule (repeatable)");
  cmd->add_option("--family", cfg.family, "duration family (lognormal, normal, uniform, triangular, beta, two-point, deterministic)");
  cmd->add_option("--cv-lo", cfg.cv_lo, "lower bound of the per-activity CV draw");
  cmd->add_option("--cv-hi", cfg.cv_hi, "upper bound of the per-activity CV draw");
  cmd->add_option("--seed", cfg.seed, "seed for deviates (and for the CV draw unless --model is given)");
  cmd->add_option("--reps", cfg.replications, "Monte Carlo replications per control time");
  cmd->add_option("--grid-step", cfg.grid_step, "control grid step (integer periods)");
  cmd->add_option("--policy-start", cfg.start_policy, "ready-time | precedence-only");
  cmd->add_option("--policy-ongoing", cfg.ongoing_policy, "scaled-sd | all-or-nothing");
  cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  cmd->add_option("--model", cfg.model_path, "reuse duration model from this model.json");
  cmd->add_flag("--plot", cfg.plot, "also write two-column .dat curve files");
}

// ---- input loading -------------------------------------------------------

struct Inputs {
  std::optional<ProjectInstance> instance;
  std::optional<MultiProjectProblem> problem;
};

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  if (cfg.instance.empty() == cfg.bundle.empty())
    throw ParseError("exactly one of --instance or --bundle is required");
  if (!cfg.instance.empty()) {
    in.instance = parse_instance(slurp(cfg.instance));
  } else {
    const fs::path base = fs::path(cfg.bundle).parent_path();
    auto resolver = [&base](const std::string& rel) { return slurp((base / rel).string()); };
    const std::string name = fs::path(cfg.bundle).stem().string();
    MultiProjectProblem prob = parse_multiproject(slurp(cfg.bundle), resolver, name);
    check_problem(prob);
    in.problem = std::move(prob);
  }
  return in;
}

std::string label_for_file(const std::string& path) { return fs::path(path).stem().string(); }

std::string safe_filename(const std::string& label) {
  std::string out;
  for (char c : label)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
  return out;
}

RunMeta meta_from_config(const RunConfig& cfg) {
  RunMeta meta;
  meta.seed = cfg.seed;
  meta.replications = cfg.replications;
  meta.family = family_from_name(cfg.family);
  meta.cv_lo = cfg.cv_lo;
  meta.cv_hi = cfg.cv_hi;
  meta.start_policy = start_policy_from_name(cfg.start_policy);
  meta.ongoing_policy = ongoing_policy_from_name(cfg.ongoing_policy);
  meta.grid_step = cfg.grid_step;
  return meta;
}

DurationModel obtain_model(const RunConfig& cfg, const Inputs& in) {
  if (!cfg.model_path.empty()) {
    std::istringstream is(slurp(cfg.model_path));
    DurationModel m = read_model(is);
    if (in.instance) check_model(m, *in.instance);
    if (in.problem) check_model(m, *in.problem);
    return m;
  }
  ModelOptions opt;
  opt.family = family_from_name(cfg.family);
  opt.cv_lo = cfg.cv_lo;
  opt.cv_hi = cfg.cv_hi;
  opt.seed = cfg.seed;
  return in.instance ? build_model(*in.instance, opt) : build_model(*in.problem, opt);
}

// ---- subcommands ---------------------------------------------------------

int cmd_validate(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  if (cfg.schedules.empty()) throw ParseError("validate needs at least one --schedule");

  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  bool all_feasible = true;
  for (const std::string& path : cfg.schedules) {
    const std::string label = label_for_file(path);
    FeasibilityReport rep;
    if (in.instance) {
      rep = validate(parse_schedule(slurp(path), label), *in.instance);
    } else {
      rep = validate(parse_schedules(slurp(path), label), *in.problem);
    }
    all_feasible = all_feasible && rep.feasible;
    reports.push_back(feasibility_json(label, rep));
    std::cout << label << ": " << (rep.feasible ? "feasible" : "infeasible") << "\n";
  }
  nlohmann::ordered_json root;
  root["schema"] = 1;
  root["reports"] = std::move(reports);
  if (!cfg.out.empty())
    spill(fs::path(cfg.out) / "validation.json", root.dump(2) + "\n");
  else
    std::cout << root.dump(2) << "\n";
  return all_feasible ? kExitOk : kExitInfeasible;
}

// Shared by rank and curve (curve is rank restricted to one candidate).
int run_ranking(const RunConfig& cfg, bool single_candidate) {
  const Inputs in = load_inputs(cfg);
  const RunMeta meta = meta_from_config(cfg);
  const DurationModel model = obtain_model(cfg, in);

  RankOptions opt;
  opt.sim.seed = cfg.seed;
  opt.sim.replications = cfg.replications;
  opt.sim.start_policy = meta.start_policy;
  opt.sim.ongoing_policy = meta.ongoing_policy;
  opt.sim.threads = cfg.threads;
  opt.grid_step = cfg.grid_step;

  RiskReport report;
  if (in.instance) {
    std::vector<Schedule> candidates;
    for (const std::string& path : cfg.schedules)
      candidates.push_back(parse_schedule(slurp(path), label_for_file(path)));
    for (const std::string& rule : cfg.sgs_rules)
      candidates.push_back(serial_sgs(*in.instance, rule_from_name(rule)));
    if (candidates.empty()) throw ParseError("no candidates: pass --schedule or --sgs");
    if (single_candidate && candidates.size() != 1)
      throw ParseError("curve takes exactly one candidate");
    report = rank_schedules(*in.instance, candidates, model, opt);
  } else {
    std::vector<BundleCandidate> candidates;
    for (const std::string& path : cfg.schedules)
      candidates.push_back({label_for_file(path), parse_schedules(slurp(path), label_for_file(path))});
    for (const std::string& rule : cfg.sgs_rules) {
      const PriorityRule r = rule_from_name(rule);
      candidates.push_back({rule_name(r), serial_sgs(*in.problem, r)});
    }
    if (candidates.empty()) throw ParseError("no candidates: pass --schedule or --sgs");
    if (single_candidate && candidates.size() != 1)
      throw ParseError("curve takes exactly one candidate");
    report = rank_schedules(*in.problem, candidates, model, opt);
  }

  // persistence: report.json + model.json sidecar + per-candidate curves
  const fs::path outdir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
  spill(outdir / "report.json", risk_report_json(report, meta).dump(2) + "\n");
  {
    std::ostringstream ms;
    write_model(ms, model);
    spill(outdir / "model.json", ms.str());
  }
  for (const ScheduleRisk& s : report.schedules) {
    if (!s.feasible) continue;
    std::ostringstream cs;
    write_curve_csv(cs, s.curve);
    spill(outdir / ("srb_" + safe_filename(s.label) + ".csv"), cs.str());
    if (cfg.plot) {
      std::ostringstream ps;
      for (const SRBPoint& p : s.curve.points)
        ps << p.t << ' ' << format_double(p.variance) << '\n';
      spill(outdir / ("srb_" + safe_filename(s.label) + ".dat"), ps.str());
    }
  }

  // console table, SRV ascending, two decimals
  std::cout << std::left << std::setw(24) << "label" << std::right << std::setw(10) << "planned"
            << std::setw(10) << "mean" << std::setw(12) << "SRV" << "\n";
  std::cout << std::fixed << std::setprecision(2);
  for (const std::string& label : report.ranking) {
    for (const ScheduleRisk& s : report.schedules) {
      if (s.label != label) continue;
      std::cout << std::left << std::setw(24) << s.label << std::right << std::setw(10) << s.planned
                << std::setw(10) << s.mean << std::setw(12) << s.srv_value << "\n";
    }
  }
  for (const ScheduleRisk& s : report.schedules)
    if (!s.feasible) std::cout << s.label << ": rejected (" << s.rejection << ")\n";

  return report.ranking.empty() ? kExitInfeasible : kExitOk;
}

int cmd_sgs(const RunConfig& cfg, const std::vector<std::string>& rules) {
  const Inputs in = load_inputs(cfg);
  if (rules.empty()) throw ParseError("sgs needs at least one --rule");
  const fs::path outdir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
  for (const std::string& name : rules) {
    const PriorityRule rule = rule_from_name(name);
    if (in.instance) {
      const Schedule s = serial_sgs(*in.instance, rule);
      spill(outdir / ("sgs_" + safe_filename(rule_name(rule)) + ".csv"), write_schedule(s));
      std::cout << rule_name(rule) << ": makespan " << makespan(s, *in.instance) << "\n";
    } else {
      const std::vector<Schedule> ss = serial_sgs(*in.problem, rule);
      spill(outdir / ("sgs_" + safe_filename(rule_name(rule)) + ".csv"), write_schedules(ss));
      const auto m = multiproject_metrics(ss, *in.problem);
      std::cout << rule_name(rule) << ": total makespan " << m.tms << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"schedule risk analysis: simulate risk baselines, rank schedules"};
  app.require_subcommand(1);

  RunConfig cfg;
  // pre-scan for --config so flags parsed afterwards override the file
  try {
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") apply_config_file(cfg, argv[i + 1]);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  std::string config_dummy;

  CLI::App* validate_cmd = app.add_subcommand("validate", "check schedules against an instance");
  add_common_flags(validate_cmd, cfg);
  validate_cmd->add_option("--config", config_dummy, "JSON config file");

  CLI::App* rank_cmd = app.add_subcommand("rank", "rank candidate schedules by SRV");
  add_common_flags(rank_cmd, cfg);
  add_sim_flags(rank_cmd, cfg);
  rank_cmd->add_option("--config", config_dummy, "JSON config file");

  CLI::App* curve_cmd = app.add_subcommand("curve", "risk curve for one schedule");
  add_common_flags(curve_cmd, cfg);
  add_sim_flags(curve_cmd, cfg);
  curve_cmd->add_option("--config", config_dummy, "JSON config file");

  CLI::App* sgs_cmd = app.add_subcommand("sgs", "generate candidate schedules");
  add_common_flags(sgs_cmd, cfg);
  std::vector<std::string> sgs_rule_names;
  sgs_cmd->add_option("--rule", sgs_rule_names, "priority rule (repeatable)");
  sgs_cmd->add_option("--config", config_dummy, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(cfg);
    if (app.got_subcommand(rank_cmd)) return run_ranking(cfg, false);
    if (app.got_subcommand(curve_cmd)) return run_ranking(cfg, true);
    if (app.got_subcommand(sgs_cmd)) return cmd_sgs(cfg, sgs_rule_names);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
