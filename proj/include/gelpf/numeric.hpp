#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace gelpf::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log(1 - exp(-x)) for x >= 0, accurate at both ends (Maechler's log1mexp).
inline double log1mexp(double x) noexcept {
  if (x <= 0.0) return -kInf;
  return x < std::numbers::ln2 ? std::log(-std::expm1(-x)) : std::log1p(-std::exp(-x));
}

/// log((1 - exp(-x)) / x), finite and smooth down to x = 0 where it equals 0.
inline double log1mexp_over_x(double x) noexcept {
  if (x < 1e-8) return -0.5 * x;
  return std::log(-std::expm1(-x) / x);
}

/// x / (exp(x) - 1), equal to 1 at x = 0.
inline double x_over_expm1(double x) noexcept {
  if (x < 1e-8) return 1.0 - 0.5 * x;
  if (x > 700.0) return 0.0;
  return x / std::expm1(x);
}

/// Numerically stable log(sum(exp(v))).
inline double log_sum_exp(std::span<const double> v) noexcept {
  if (v.empty()) return -kInf;
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace gelpf::numeric
