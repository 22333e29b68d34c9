#pragma once

// Shared helpers for the test suite: fixture loading, compact instance
// construction, and high-precision numeric utilities used as oracles.

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <schedrisk/schedrisk.hpp>

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string load_fixture(const std::string& name) { return slurp(fixture_path(name)); }

/// Build an instance from {duration, demands, successors-as-file-ids}
/// rows; row i gets file id i+1, matching the PSPLib layout.
struct ActSpec {
  int dur;
  std::vector<int> dem;
  std::vector<int> succ;
};

inline schedrisk::ProjectInstance make_instance(const std::string& name,
                                                const std::vector<ActSpec>& rows,
                                                const std::vector<int>& capacities) {
  schedrisk::ProjectInstance inst;
  inst.name = name;
  for (std::size_t r = 0; r < capacities.size(); ++r)
    inst.resources.push_back({static_cast<int>(r), capacities[r]});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    schedrisk::Activity a;
    a.id = static_cast<int>(i);
    a.file_id = static_cast<int>(i) + 1;
    a.duration = rows[i].dur;
    a.demands = rows[i].dem;
    for (int s : rows[i].succ) a.successors.push_back(s - 1);
    inst.activities.push_back(std::move(a));
  }
  schedrisk::check_instance(inst);
  return inst;
}

/// E[g(Z)] for standard-normal Z by composite Simpson over [-10, 10].
/// With step 1e-3 the truncation and quadrature errors are far below
/// the tolerances used anywhere in the suite.
template <typename G>
double normal_expectation(G&& g, double step = 1e-3) {
  const double lo = -10.0, hi = 10.0;
  const int n = static_cast<int>((hi - lo) / step);  // even by construction
  auto f = [&](double z) {
    return g(z) * 0.3989422804014326779 * std::exp(-0.5 * z * z);
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += f(lo + i * step) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * step / 3.0;
}

/// Batch-means standard error of the SRV estimate: split replications
/// into equal batches, compute the trapezoidal SRV from each batch's
/// own per-time sample variances, and take the SE of the batch mean.
inline double srv_standard_error(const schedrisk::SrbSamples& s, int batches) {
  const int n = static_cast<int>(s.totals.front().size());
  const int bsz = n / batches;
  std::vector<double> areas;
  for (int b = 0; b < batches; ++b) {
    std::vector<double> vars(s.times.size());
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      double mean = 0, ssd = 0;
      for (int r = b * bsz; r < (b + 1) * bsz; ++r) mean += s.totals[k][r];
      mean /= bsz;
      for (int r = b * bsz; r < (b + 1) * bsz; ++r) {
        const double d = s.totals[k][r] - mean;
        ssd += d * d;
      }
      vars[k] = ssd / (bsz - 1);
    }
    double area = 0;
    for (std::size_t k = 1; k < s.times.size(); ++k)
      area += 0.5 * (vars[k - 1] + vars[k]) * (s.times[k] - s.times[k - 1]);
    areas.push_back(area);
  }
  double m = 0;
  for (double a : areas) m += a;
  m /= batches;
  double ssd = 0;
  for (double a : areas) ssd += (a - m) * (a - m);
  return std::sqrt(ssd / (batches - 1) / batches);
}

}  // namespace testutil
