#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace schedrisk {

/// SplitMix64 finalizer. Used as the mixing core of all deterministic
/// streams in this library: every random quantity is a pure function of
/// (seed, counter) and therefore independent of evaluation order.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t key) {
  return splitmix64(seed ^ splitmix64(key));
}

inline constexpr std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(hash_mix(seed, a) ^ splitmix64(b + 0x9e3779b97f4a7c15ULL));
}

/// Map 64 hash bits to (0, 1), excluding both endpoints.
inline constexpr double to_unit_interval(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// U(lo, hi) draw keyed on (seed, key); order-independent by construction.
inline double uniform_hash(std::uint64_t seed, std::uint64_t key, double lo, double hi) {
  return lo + (hi - lo) * to_unit_interval(hash_mix(seed, key));
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

/// Inverse standard normal CDF. Acklam's rational approximation with one
/// Halley refinement against erfc; good to ~1e-15 over (0, 1).
inline double inverse_normal_cdf(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step.
  const double e = normal_cdf(x) - p;
  const double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

/// Source of the standard-normal deviates consumed by the simulation
/// engine: z(replication, activity slot). Tests may inject custom
/// sources (e.g. exhaustive two-point patterns).
using DeviateSource = std::function<double(std::uint32_t replication, std::uint32_t activity)>;

/// Counter-based default: each (replication, activity) pair owns one
/// deviate derived from the seed alone. Reusing the same source across
/// control periods and across candidate schedules yields common random
/// numbers.
inline DeviateSource counter_deviates(std::uint64_t seed) {
  return [seed](std::uint32_t rep, std::uint32_t act) {
    return inverse_normal_cdf(to_unit_interval(hash_mix(seed, rep, act)));
  };
}

}  // namespace schedrisk
