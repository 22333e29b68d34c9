#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "schedrisk/rng.hpp"
#include "schedrisk/simview.hpp"

namespace schedrisk {

/// Integer control times 0..t_f at which the risk baseline is
/// evaluated. Always starts at 0 and ends exactly at t_f.
struct ControlGrid {
  std::vector<int> times;

  static ControlGrid regular(int t_f, int step = 1) {
    if (t_f < 0) throw std::domain_error("planned makespan must be non-negative");
    if (step < 1) throw std::domain_error("grid step must be >= 1");
    ControlGrid g;
    for (int t = 0; t < t_f; t += step) g.times.push_back(t);
    g.times.push_back(t_f);
    return g;
  }
};

/// Knobs for one simulation run. Replication results depend only on
/// (seed, replication index, activity index); the thread count changes
/// how the work is partitioned, never what is computed.
struct SimOptions {
  std::uint64_t seed = 0;
  int replications = 10000;
  StartPolicy start_policy = StartPolicy::ready_time;
  OngoingPolicy ongoing_policy = OngoingPolicy::scaled_sd;
  int threads = 1;  // 0 = ask the hardware
};

struct SRBPoint {
  int t = 0;
  double variance = 0;
  double mean = 0;
  double sd = 0;
};

struct SRBCurve {
  std::string label;
  std::vector<SRBPoint> points;
  int replications = 0;
  std::uint64_t seed = 0;
};

/// Raw simulated totals: one row per control time, one column per
/// replication. Kept around so callers can derive quantiles and
/// standard errors from the same draws that built the curve.
struct SrbSamples {
  std::vector<int> times;
  std::vector<std::vector<double>> totals;  // totals[time index][replication]
  double planned_makespan = 0;
};

namespace detail {

inline int resolve_thread_count(int requested, int replications) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  return std::min(n, std::max(1, replications));
}

// Sample mean and variance (divisor n-1), two-pass in index order so
// the result is a fixed function of the values, independent of how
// they were produced.
inline void mean_variance(const std::vector<double>& xs, double& mean, double& variance) {
  const std::size_t n = xs.size();
  double sum = 0;
  for (double x : xs) sum += x;
  mean = sum / static_cast<double>(n);
  double ssd = 0;
  for (double x : xs) {
    const double d = x - mean;
    ssd += d * d;
  }
  variance = n > 1 ? ssd / static_cast<double>(n - 1) : 0.0;
}

}  // namespace detail

/// Run the conditional Monte Carlo: `replications` forward passes per
/// control time, with the same per-(replication, activity) deviates
/// reused at every time (common random numbers). The final grid time
/// equals the planned makespan, where every activity is finished on
/// plan; that row is filled with the planned makespan directly, which
/// makes the terminal variance exactly zero.
inline SrbSamples simulate_totals(const SimView& view, const ControlGrid& grid,
                                  const SimOptions& opt, const DeviateSource& deviates) {
  if (opt.replications < 2) throw std::domain_error("need at least 2 replications");
  if (grid.times.empty() || grid.times.front() != 0)
    throw std::domain_error("control grid must start at 0");

  SrbSamples samples;
  samples.times = grid.times;
  samples.planned_makespan = view.planned_makespan;
  const std::size_t nt = grid.times.size();
  const std::size_t nr = static_cast<std::size_t>(opt.replications);
  samples.totals.assign(nt, std::vector<double>(nr, 0.0));

  auto run_range = [&](std::size_t rep_lo, std::size_t rep_hi) {
    std::vector<double> factors;
    std::vector<double> finish;
    for (std::size_t rep = rep_lo; rep < rep_hi; ++rep) {
      replication_factors(view, deviates, static_cast<std::uint32_t>(rep), factors);
      for (std::size_t ti = 0; ti < nt; ++ti) {
        const double t = static_cast<double>(grid.times[ti]);
        samples.totals[ti][rep] =
            t >= view.planned_makespan
                ? view.planned_makespan
                : simulate_duration(view, t, factors, opt.start_policy, opt.ongoing_policy, &finish);
      }
    }
  };

  const int nthreads = detail::resolve_thread_count(opt.threads, opt.replications);
  if (nthreads == 1) {
    run_range(0, nr);
  } else {
    // replications are split into disjoint contiguous ranges; each
    // cell is written by exactly one thread and no cell is read back
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    const std::size_t chunk = (nr + static_cast<std::size_t>(nthreads) - 1) / static_cast<std::size_t>(nthreads);
    for (int w = 0; w < nthreads; ++w) {
      const std::size_t lo = static_cast<std::size_t>(w) * chunk;
      const std::size_t hi = std::min(nr, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (std::thread& th : pool) th.join();
  }
  return samples;
}

/// Reduce the sample matrix to the risk curve. The reduction is
/// single-threaded and in replication order, so the curve bytes do not
/// depend on how the sampling was parallelized.
inline SRBCurve curve_from_samples(const SrbSamples& samples, const std::string& label,
                                   const SimOptions& opt) {
  SRBCurve curve;
  curve.label = label;
  curve.replications = static_cast<int>(samples.totals.empty() ? 0 : samples.totals.front().size());
  curve.seed = opt.seed;
  curve.points.reserve(samples.times.size());
  for (std::size_t ti = 0; ti < samples.times.size(); ++ti) {
    SRBPoint p;
    p.t = samples.times[ti];
    detail::mean_variance(samples.totals[ti], p.mean, p.variance);
    p.sd = std::sqrt(p.variance);
    curve.points.push_back(p);
  }
  return curve;
}

/// Convenience wrapper: simulate and reduce in one call.
inline SRBCurve srb_curve(const SimView& view, const ControlGrid& grid, const SimOptions& opt,
                          const DeviateSource& deviates) {
  return curve_from_samples(simulate_totals(view, grid, opt, deviates), view.label, opt);
}

inline SRBCurve srb_curve(const SimView& view, const SimOptions& opt, int grid_step = 1) {
  const int t_f = static_cast<int>(std::llround(view.planned_makespan));
  return srb_curve(view, ControlGrid::regular(t_f, grid_step), opt, counter_deviates(opt.seed));
}

/// Area under the risk curve by the composite trapezoidal rule over
/// the curve's own grid.
inline double srv(const SRBCurve& curve) {
  double area = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const SRBPoint& a = curve.points[i - 1];
    const SRBPoint& b = curve.points[i];
    area += 0.5 * (a.variance + b.variance) * static_cast<double>(b.t - a.t);
  }
  return area;
}

/// Linear-interpolation quantile (the common "type 7" convention) of a
/// sample set; `xs` need not be sorted.
inline double quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw std::domain_error("quantile of an empty sample");
  if (p < 0 || p > 1) throw std::domain_error("quantile level must lie in [0, 1]");
  std::sort(xs.begin(), xs.end());
  const double h = p * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = h - static_cast<double>(lo);
  return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

}  // namespace schedrisk
