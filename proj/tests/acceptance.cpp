// Acceptance battery: eight end-to-end checks, one PASS/FAIL line each.
// Exits nonzero if any criterion fails.  Runs standalone (no test
// framework) so the output reads as a release checklist.
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <schedrisk/schedrisk.hpp>

#include "helpers.hpp"

using namespace schedrisk;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int n, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << n << ". " << name;
  if (!pass && !detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

template <typename Fn>
void criterion(int n, const std::string& name, Fn&& body) {
  std::ostringstream why;
  bool pass = false;
  try {
    pass = body(why);
  } catch (const std::exception& e) {
    why << "exception: " << e.what();
  }
  report(n, name, pass, why.str());
}

const std::vector<std::string> kInstanceFixtures = {
    "chain2.sm", "parallel2.sm", "squeeze.sm", "alpha.sm", "beta.sm", "demo30.sm"};

ProjectInstance load_instance(const std::string& name) {
  return parse_instance(testutil::load_fixture(name));
}

MultiProjectProblem load_duo() {
  const auto resolver = [](const std::string& rel) { return testutil::load_fixture(rel); };
  return parse_multiproject(testutil::load_fixture("duo.mp"), resolver, "duo");
}

DurationModel explicit_model(const ProjectInstance& inst, Family family,
                             const std::map<int, double>& cvs) {
  DurationModel m;
  for (const Activity& a : inst.activities) {
    DurationSpec spec{Family::deterministic, static_cast<double>(a.duration), 0.0};
    const auto it = cvs.find(a.file_id);
    if (it != cvs.end() && a.duration > 0)
      spec = {family, static_cast<double>(a.duration), it->second};
    m.specs[inst.name][a.file_id] = spec;
  }
  return m;
}

// ---- criterion 1: terminal variance -------------------------------------

bool terminal_zero(std::ostringstream& why) {
  const std::vector<std::string> rules = {"min-slack", "shortest-duration"};
  bool ok = true;
  for (const std::string& f : kInstanceFixtures) {
    const ProjectInstance inst = load_instance(f);
    const DurationModel model = build_model(inst, {Family::lognormal, 0.10, 0.30, 42});
    for (const std::string& rule : rules) {
      const Schedule sched = serial_sgs(inst, rule_from_name(rule));
      const SimView view = build_simview(inst, sched, model);
      SimOptions opt;
      opt.seed = 5;
      opt.replications = 200;
      const SRBCurve curve = srb_curve(view, opt);
      const SRBPoint& last = curve.points.back();
      if (!(last.variance == 0.0 && last.mean == view.planned_makespan)) {
        ok = false;
        why << f << "/" << rule << " terminal var " << last.variance << "; ";
      }
    }
  }
  const MultiProjectProblem duo = load_duo();
  const DurationModel duo_model = build_model(duo, {Family::lognormal, 0.10, 0.30, 42});
  const std::vector<Schedule> scheds = serial_sgs(duo, PriorityRule::min_slack());
  const SimView view = build_simview(duo, scheds, duo_model, "duo");
  SimOptions opt;
  opt.seed = 5;
  opt.replications = 200;
  const SRBCurve curve = srb_curve(view, opt);
  if (!(curve.points.back().variance == 0.0)) {
    ok = false;
    why << "duo bundle terminal var " << curve.points.back().variance;
  }
  return ok;
}

// ---- criterion 2: serial-chain closed form -------------------------------

bool chain_closed_form(std::ostringstream& why) {
  const ProjectInstance inst = load_instance("chain2.sm");
  // Activity 2: mean 4, sd 1 (cv 1/4).  Activity 3: mean 3, sd 1 (cv 1/3).
  const DurationModel model =
      explicit_model(inst, Family::lognormal, {{2, 0.25}, {3, 1.0 / 3.0}});
  Schedule plan;
  plan.instance_name = "chain2";
  plan.label = "chain";
  plan.starts = {{2, 0}, {3, 4}};
  const SimView view = build_simview(inst, plan, model);

  SimOptions opt;
  opt.seed = 2024;
  opt.replications = 50000;
  opt.start_policy = StartPolicy::precedence_only;
  const SRBCurve curve = srb_curve(view, opt);

  // Var(T | t) = sd1^2 ((4-t)/4)^2 [t < 4] + sd2^2 min(1, (7-t)/3)^2 [t < 7]
  const std::vector<double> targets = {2.0,       1.5625, 1.25,      1.0625,
                                       1.0, 4.0 / 9.0, 1.0 / 9.0, 0.0};
  bool ok = curve.points.size() == targets.size();
  if (!ok) why << "grid size " << curve.points.size() << "; ";
  for (std::size_t i = 0; ok && i < targets.size(); ++i) {
    const double got = curve.points[i].variance;
    const double want = targets[i];
    const double tol = want < 0.5 ? 0.02 : 0.03 * want;
    if (!(std::abs(got - want) <= tol)) {
      ok = false;
      why << "t=" << curve.points[i].t << " var " << got << " vs " << want << "; ";
    }
  }
  const double area = srv(curve);
  const double want_area = 463.0 / 72.0;  // trapezoid of the closed form
  if (!(std::abs(area - want_area) <= 0.02 * want_area)) {
    ok = false;
    why << "srv " << area << " vs " << want_area;
  }
  return ok;
}

// ---- criterion 3: degeneracy ----------------------------------------------

bool degeneracy(std::ostringstream& why) {
  bool ok = true;
  for (const std::string& f : kInstanceFixtures) {
    const ProjectInstance inst = load_instance(f);
    const DurationModel model = build_model(inst, {Family::deterministic, 0.0, 0.0, 1});
    const Schedule sched = serial_sgs(inst, PriorityRule::min_slack());
    const SimView view = build_simview(inst, sched, model);
    SimOptions opt;
    opt.seed = 3;
    opt.replications = 100;
    const SRBCurve curve = srb_curve(view, opt);
    for (const SRBPoint& p : curve.points) {
      if (!(p.variance == 0.0 && p.mean == view.planned_makespan)) {
        ok = false;
        why << f << " t=" << p.t << " mean " << p.mean << " var " << p.variance << "; ";
        break;
      }
    }
    if (srv(curve) != 0.0) {
      ok = false;
      why << f << " srv nonzero; ";
    }
  }
  // A zero-width cv range must behave identically through the stochastic path.
  const ProjectInstance squeeze = load_instance("squeeze.sm");
  const DurationModel flat = build_model(squeeze, {Family::lognormal, 0.0, 0.0, 1});
  const SimView view =
      build_simview(squeeze, serial_sgs(squeeze, PriorityRule::min_slack()), flat);
  SimOptions opt;
  opt.seed = 3;
  opt.replications = 100;
  const SRBCurve curve = srb_curve(view, opt);
  if (!(srv(curve) == 0.0 && curve.points.front().mean == view.planned_makespan)) {
    ok = false;
    why << "lognormal cv 0 not degenerate";
  }
  return ok;
}

// ---- criterion 4: exhaustive two-point enumeration ------------------------

// Independent forward pass for one (control time, sign pattern) pair.
double enumerated_total(const SimView& view, int t, std::uint32_t rep) {
  const std::size_t n = view.acts.size();
  std::vector<double> finish(n, 0.0);
  double total = 0.0;
  for (int idx : view.order) {
    const SimActivity& a = view.acts[idx];
    const double cv = a.spec.cv;
    const bool fixed = a.spec.family == Family::deterministic || cv == 0.0;
    const double factor = fixed ? 1.0 : (((rep >> idx) & 1u) ? 1.0 + cv : 1.0 - cv);
    double f = 0.0;
    if (a.planned_finish <= t) {
      f = a.planned_finish;
    } else if (a.planned_start < t) {
      f = t + (a.planned_finish - t) * factor;
    } else {
      double start = a.planned_start;  // ready-time floor
      for (int p : a.preds) start = std::max(start, finish[p]);
      f = start + a.planned_dur * factor;
    }
    finish[idx] = f;
    total = std::max(total, f);
  }
  return total;
}

bool brute_force(std::ostringstream& why) {
  struct Net {
    std::string file;
    std::map<int, double> cvs;  // dyadic, so all arithmetic is exact
  };
  const std::vector<Net> nets = {
      {"chain2.sm", {{2, 0.25}, {3, 0.5}}},
      {"parallel2.sm", {{2, 0.5}, {3, 0.25}}},
      {"squeeze.sm", {{2, 0.5}, {3, 0.25}, {4, 0.125}, {5, 0.25}}},
  };
  bool ok = true;
  for (const Net& net : nets) {
    const ProjectInstance inst = load_instance(net.file);
    const DurationModel model = explicit_model(inst, Family::two_point, net.cvs);
    const Schedule sched = serial_sgs(inst, PriorityRule::min_slack());
    const SimView view = build_simview(inst, sched, model);

    const auto n = static_cast<std::uint32_t>(view.acts.size());
    const auto reps = static_cast<int>(1u << n);
    const DeviateSource signs = [](std::uint32_t rep, std::uint32_t act) {
      return ((rep >> act) & 1u) ? 1.0 : -1.0;
    };
    SimOptions opt;
    opt.replications = reps;
    const ControlGrid grid =
        ControlGrid::regular(static_cast<int>(std::llround(view.planned_makespan)));
    const SrbSamples samples = simulate_totals(view, grid, opt, signs);

    for (std::size_t ti = 0; ok && ti < grid.times.size(); ++ti) {
      const int t = grid.times[ti];
      for (int rep = 0; rep < reps; ++rep) {
        const double want = t >= view.planned_makespan
                                ? view.planned_makespan
                                : enumerated_total(view, t, static_cast<std::uint32_t>(rep));
        if (samples.totals[ti][rep] != want) {
          ok = false;
          why << net.file << " t=" << t << " rep=" << rep << ": engine "
              << samples.totals[ti][rep] << " vs enumerated " << want << "; ";
          break;
        }
      }
    }
  }
  return ok;
}

// ---- criterion 5: byte-stable reports -------------------------------------

int run_cli(const std::string& args) {
  const int raw = std::system((std::string(CLI_PATH) + " " + args).c_str());
  return raw == -1 ? -1 : WEXITSTATUS(raw);
}

bool byte_stable_reports(std::ostringstream& why) {
  const fs::path base = fs::temp_directory_path() / "schedrisk_acceptance";
  fs::remove_all(base);
  const fs::path a = base / "a";
  const fs::path b = base / "b";
  const fs::path c = base / "c";
  fs::create_directories(a);
  fs::create_directories(b);
  fs::create_directories(c);

  const std::string common = "rank --instance " + testutil::fixture_path("squeeze.sm") +
                             " --schedule " + testutil::fixture_path("squeeze_good.csv") +
                             " --sgs min-slack --sgs shortest-duration --seed 7 --reps 500";
  const std::string quiet = " > /dev/null";
  bool ok = true;
  if (run_cli(common + " --out " + a.string() + quiet) != 0) {
    why << "first run failed";
    return false;
  }
  if (run_cli(common + " --out " + b.string() + quiet) != 0) {
    why << "second run failed";
    return false;
  }
  if (run_cli(common + " --threads 4 --out " + c.string() + quiet) != 0) {
    why << "threaded run failed";
    return false;
  }
  const std::string ra = testutil::slurp((a / "report.json").string());
  const std::string rb = testutil::slurp((b / "report.json").string());
  const std::string rc = testutil::slurp((c / "report.json").string());
  if (ra != rb) {
    ok = false;
    why << "rerun differs; ";
  }
  if (ra != rc) {
    ok = false;
    why << "thread count changed the report";
  }
  return ok && !ra.empty();
}

// ---- criterion 6: 30-activity portfolio ranking ----------------------------

bool portfolio_ranking(std::ostringstream& why) {
  const ProjectInstance inst = load_instance("demo30.sm");
  const DurationModel model = build_model(inst, {Family::lognormal, 0.10, 0.30, 42});
  const std::vector<std::string> rule_names = {"min-slack",       "latest-finish",
                                               "shortest-duration", "most-successors",
                                               "random:2",        "random:4"};

  std::vector<Schedule> candidates;
  for (const std::string& r : rule_names) candidates.push_back(serial_sgs(inst, rule_from_name(r)));

  // (a) equal planned durations, and at least four genuinely different plans.
  bool ok = true;
  std::vector<std::map<int, int>> plans;
  for (const Schedule& s : candidates) {
    if (makespan(s, inst) != 60) {
      ok = false;
      why << s.label << " makespan " << makespan(s, inst) << " != 60; ";
    }
    plans.push_back(s.starts);
  }
  std::sort(plans.begin(), plans.end());
  plans.erase(std::unique(plans.begin(), plans.end()), plans.end());
  if (plans.size() < 4) {
    ok = false;
    why << "only " << plans.size() << " distinct plans; ";
  }
  if (!ok) return false;

  const ControlGrid grid = ControlGrid::regular(60);
  const std::vector<std::uint64_t> seeds = {101, 202, 303, 404, 505};
  std::vector<std::string> winners;
  std::vector<double> srvs, ses, means;

  for (std::size_t si = 0; si < seeds.size(); ++si) {
    std::string best_label;
    double best_srv = 0.0;
    for (const Schedule& s : candidates) {
      const SimView view = build_simview(inst, s, model);
      SimOptions opt;
      opt.seed = seeds[si];
      opt.replications = 10000;
      const SrbSamples samples = simulate_totals(view, grid, opt, counter_deviates(opt.seed));
      const SRBCurve curve = curve_from_samples(samples, s.label, opt);
      const double area = srv(curve);
      if (best_label.empty() || area < best_srv) {
        best_label = s.label;
        best_srv = area;
      }
      if (si == 0) {
        srvs.push_back(area);
        ses.push_back(testutil::srv_standard_error(samples, 20));
        means.push_back(curve.points.front().mean);
      }
    }
    winners.push_back(best_label);
  }

  // (b) simulated means sit in [planned, planned + 5%].
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (!(means[i] >= 60.0 && means[i] <= 63.0)) {
      ok = false;
      why << candidates[i].label << " mean " << means[i] << " outside [60, 63]; ";
    }
  }
  // (c) at least one candidate pair separated by > 3 pooled standard errors.
  bool separated = false;
  for (std::size_t i = 0; i < srvs.size(); ++i)
    for (std::size_t j = i + 1; j < srvs.size(); ++j)
      if (std::abs(srvs[i] - srvs[j]) > 3.0 * std::hypot(ses[i], ses[j])) separated = true;
  if (!separated) {
    ok = false;
    why << "no pair separated by 3 pooled SEs; ";
  }
  // (d) the winner is stable across replication seeds (same CV draw).
  std::map<std::string, int> votes;
  for (const std::string& w : winners) votes[w]++;
  int top = 0;
  for (const auto& [label, n] : votes) top = std::max(top, n);
  if (top < 4) {
    ok = false;
    why << "winner only " << top << "/5 stable;";
    for (const std::string& w : winners) why << " " << w;
  }
  return ok;
}

// ---- criterion 7: multi-project delay metrics ------------------------------

bool delay_metrics(std::ostringstream& why) {
  const MultiProjectProblem duo = load_duo();
  const std::vector<Schedule> scheds = parse_schedules(testutil::load_fixture("duo_delay.csv"));
  if (!validate(scheds, duo).feasible) {
    why << "engineered schedule infeasible";
    return false;
  }
  const MultiProjectMetrics m = multiproject_metrics(scheds, duo);
  bool ok = true;
  if (m.apd != 3.0) {
    ok = false;
    why << "APD " << m.apd << " != 3; ";
  }
  if (std::abs(m.dpd - 4.242640687119285) > 1e-9) {
    ok = false;
    why << "DPD " << m.dpd << "; ";
  }
  if (m.tms != 11) {
    ok = false;
    why << "TMS " << m.tms << " != 11";
  }
  return ok;
}

// ---- criterion 8: parser round-trips and truncation ------------------------

bool parser_corpus(std::ostringstream& why) {
  bool ok = true;
  for (const std::string& f : kInstanceFixtures) {
    const std::string text = testutil::load_fixture(f);
    const ProjectInstance inst = parse_instance(text);
    if (write_instance(inst) != text) {
      ok = false;
      why << f << " does not round-trip; ";
      continue;
    }
    // Every strict line prefix must fail with a parse diagnostic, never
    // anything harsher.
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
      cur += ch;
      if (ch == '\n') {
        lines.push_back(cur);
        cur.clear();
      }
    }
    std::string prefix;
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
      prefix += lines[i];
      try {
        (void)parse_instance(prefix);
        ok = false;
        why << f << " prefix " << i + 1 << " lines parsed; ";
      } catch (const ParseError&) {
        // expected: a diagnostic, not a crash
      } catch (const std::exception& e) {
        ok = false;
        why << f << " prefix " << i + 1 << " threw " << e.what() << "; ";
      }
    }
  }
  return ok;
}

}  // namespace

int main() {
  criterion(1, "terminal risk is zero on every fixture and candidate", terminal_zero);
  criterion(2, "serial chain matches its closed-form risk curve", chain_closed_form);
  criterion(3, "zero variability collapses to the planned makespan", degeneracy);
  criterion(4, "two-point engine totals equal exhaustive enumeration", brute_force);
  criterion(5, "report.json is byte-stable across reruns and thread counts", byte_stable_reports);
  criterion(6, "30-activity portfolio ranking is statistically meaningful and stable",
            portfolio_ranking);
  criterion(7, "multi-project delay metrics match hand-computed values", delay_metrics);
  criterion(8, "instance files round-trip and truncation is diagnosed", parser_corpus);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all acceptance criteria passed" << std::endl;
  return 0;
}
