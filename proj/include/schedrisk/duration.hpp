#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "schedrisk/rng.hpp"

namespace schedrisk {

/// Stochastic duration families. All stochastic families are
/// parameterized by (mean, cv) with sd = cv * mean; each one maps a
/// standard-normal deviate z through its inverse CDF (via Phi(z) as the
/// uniform), so z -> duration is monotone for every family.
enum class Family { deterministic, lognormal, normal, uniform, triangular, beta, two_point };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::deterministic: return "deterministic";
    case Family::lognormal: return "lognormal";
    case Family::normal: return "normal";
    case Family::uniform: return "uniform";
    case Family::triangular: return "triangular";
    case Family::beta: return "beta";
    case Family::two_point: return "two-point";
  }
  return "?";
}

inline Family family_from_name(const std::string& name) {
  if (name == "deterministic") return Family::deterministic;
  if (name == "lognormal") return Family::lognormal;
  if (name == "normal") return Family::normal;
  if (name == "uniform") return Family::uniform;
  if (name == "triangular") return Family::triangular;
  if (name == "beta") return Family::beta;
  if (name == "two-point" || name == "twopoint") return Family::two_point;
  throw std::domain_error("unknown duration family '" + name + "'");
}

/// Per-activity duration specification: mean equals the planned duration.
struct DurationSpec {
  Family family = Family::deterministic;
  double mean = 0;
  double cv = 0;

  bool operator==(const DurationSpec&) const = default;
};

struct LognormalParams {
  double location = 0;  // mean of the underlying normal
  double scale = 0;     // sd of the underlying normal
};

/// Moment inversion: the lognormal with these underlying-normal
/// parameters has exactly the requested mean and sd = cv * mean.
inline LognormalParams lognormal_params(double mean, double cv) {
  if (!(mean > 0)) throw std::domain_error("lognormal mean must be positive");
  if (!(cv > 0)) throw std::domain_error("lognormal cv must be positive");
  const double s2 = std::log1p(cv * cv);
  return {std::log(mean) - 0.5 * s2, std::sqrt(s2)};
}

namespace detail {

// Quantile of the symmetric triangular distribution on [-1, 1].
inline double triangular_unit_quantile(double u) {
  return u <= 0.5 ? std::sqrt(2.0 * u) - 1.0 : 1.0 - std::sqrt(2.0 * (1.0 - u));
}

// Beta(4,4) CDF has the closed form x^4 (35 - 84 x + 70 x^2 - 20 x^3);
// its density is 140 x^3 (1-x)^3. Inverted by Newton with a bisection
// bracket, deterministic to full precision.
inline double beta44_cdf(double x) {
  const double x2 = x * x;
  return x2 * x2 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

inline double beta44_quantile(double u) {
  double lo = 0.0, hi = 1.0, x = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double f = beta44_cdf(x) - u;
    if (f > 0)
      hi = x;
    else
      lo = x;
    const double t = 1.0 - x;
    const double pdf = 140.0 * x * x * x * t * t * t;
    double next = pdf > 1e-12 ? x - f / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

}  // namespace detail

/// Multiplier m(z) such that duration = mean * m(z). Keeping the factor
/// separate from the mean lets the conditional engine rescale ongoing
/// activities without drawing again (the cv is unchanged by the linear
/// uncertainty-elimination policy).
inline double unit_factor(Family family, double cv, double z) {
  switch (family) {
    case Family::deterministic:
      return 1.0;
    case Family::lognormal: {
      if (cv == 0) return 1.0;
      const double s2 = std::log1p(cv * cv);
      return std::exp(std::sqrt(s2) * z - 0.5 * s2);
    }
    case Family::normal:
      // truncated at zero; keeps z -> duration monotone
      return std::max(0.0, 1.0 + cv * z);
    case Family::uniform:
      return 1.0 + cv * 1.7320508075688772 * (2.0 * normal_cdf(z) - 1.0);
    case Family::triangular:
      return 1.0 + cv * 2.449489742783178 * detail::triangular_unit_quantile(normal_cdf(z));
    case Family::beta:
      return 1.0 + 3.0 * cv * (2.0 * detail::beta44_quantile(normal_cdf(z)) - 1.0);
    case Family::two_point:
      return z < 0 ? 1.0 - cv : 1.0 + cv;
  }
  return 1.0;
}

/// One sampled total duration for the spec, driven by the deviate z.
inline double sample_total_duration(const DurationSpec& spec, double z) {
  if (spec.family == Family::deterministic || spec.cv == 0) return spec.mean;
  return spec.mean * unit_factor(spec.family, spec.cv, z);
}

/// Validate a spec. Support bounds keep every family's durations
/// non-negative: uniform needs cv <= 1/sqrt(3), triangular (symmetric,
/// half-width sqrt(6) sd) cv <= 1/sqrt(6), beta (scaled to mean +- 3 sd)
/// cv <= 1/3; well above the 0.10..0.30 range used in practice.
inline void check_spec(const DurationSpec& spec) {
  if (spec.cv < 0 || spec.cv >= 1 || !std::isfinite(spec.cv))
    throw std::domain_error("cv must lie in [0, 1)");
  if (spec.family == Family::deterministic) {
    if (spec.mean < 0) throw std::domain_error("deterministic duration must be non-negative");
    return;
  }
  if (!(spec.mean > 0)) throw std::domain_error("stochastic duration mean must be positive");
  const double limit = spec.family == Family::uniform      ? 0.5773502691896258
                       : spec.family == Family::triangular ? 0.4082482904638630
                       : spec.family == Family::beta       ? 1.0 / 3.0
                                                           : 1.0;
  if (spec.cv > limit)
    throw std::domain_error(std::string(family_name(spec.family)) + " cv " + std::to_string(spec.cv) +
                            " exceeds the non-negative-support bound " + std::to_string(limit));
}

}  // namespace schedrisk
