#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "gelpf/error.hpp"

namespace gelpf {

/// Type-7 (linear interpolation) empirical quantile of an ascending range.
inline double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DataError("quantile of an empty range");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Descriptive summary. `skewness` and `kurtosis` use m3/s^3 and m4/s^4 - 3 with
/// s the (n-1) standard deviation; the other conventions are kept alongside.
struct SummaryStats {
  std::size_t n = 0;
  double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
  double skewness = 0;            ///< b1 = m3 / s^3
  double kurtosis = 0;            ///< b2 - 3 = m4 / s^4 - 3
  double skewness_population = 0; ///< g1 = m3 / m2^{3/2}
  double kurtosis_population = 0; ///< g2 = m4 / m2^2 - 3
  double skewness_adjusted = 0;   ///< G1 = g1 sqrt(n(n-1)) / (n-2)
  double kurtosis_adjusted = 0;   ///< G2 = ((n+1) g2 + 6)(n-1) / ((n-2)(n-3))
};

inline SummaryStats summarize(std::vector<double> xs) {
  if (xs.size() < 4) throw DataError("summary statistics need at least 4 values");
  std::sort(xs.begin(), xs.end());
  SummaryStats s;
  const double n = static_cast<double>(xs.size());
  s.n = xs.size();
  s.min = xs.front();
  s.max = xs.back();
  s.q1 = sorted_quantile(xs, 0.25);
  s.median = sorted_quantile(xs, 0.5);
  s.q3 = sorted_quantile(xs, 0.75);
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : xs) {
    const double d = x - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double var = m2 * n / (n - 1.0);
  s.skewness_population = m3 / std::pow(m2, 1.5);
  s.kurtosis_population = m4 / (m2 * m2) - 3.0;
  s.skewness = m3 / std::pow(var, 1.5);
  s.kurtosis = m4 / (var * var) - 3.0;
  s.skewness_adjusted = s.skewness_population * std::sqrt(n * (n - 1.0)) / (n - 2.0);
  s.kurtosis_adjusted = ((n + 1.0) * s.kurtosis_population + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
  return s;
}

}  // namespace gelpf
