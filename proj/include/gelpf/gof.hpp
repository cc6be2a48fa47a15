#pragma once

// Kolmogorov-Smirnov and Cramer-von Mises statistics for a fully specified GE
// model. p-values come from the classical asymptotic null distributions with
// the parameters treated as known; no correction is made for estimation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "gelpf/distribution.hpp"
#include "gelpf/sample.hpp"

namespace gelpf {

/// Right-continuous empirical CDF with jumps of 1/n.
class Ecdf {
public:
  explicit Ecdf(const SortedSample& s) : xs_(s.xs().begin(), s.xs().end()) {}

  double operator()(double x) const noexcept {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    return static_cast<double>(it - xs_.begin()) / static_cast<double>(xs_.size());
  }

  const std::vector<double>& knots() const noexcept { return xs_; }

private:
  std::vector<double> xs_;
};

inline Ecdf ecdf(const SortedSample& s) { return Ecdf(s); }

struct TestResult {
  double stat = 0.0;
  double pvalue = 1.0;
};

struct GofReport {
  double ks_stat = 0.0;
  double ks_pvalue = 1.0;
  double cvm_stat = 0.0;
  double cvm_pvalue = 1.0;
};

/// P(K > lambda) for the Kolmogorov distribution.
inline double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.0) {
    // small-lambda form of the CDF: sqrt(2 pi)/lambda sum exp(-(2k-1)^2 pi^2 / (8 lambda^2))
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double term = std::exp(-(2.0 * k - 1.0) * (2.0 * k - 1.0) * c);
      cdf += term;
      if (term < 1e-16) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sf = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sf += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sf, 0.0, 1.0);
}

/// Limiting CDF of the Cramer-von Mises statistic W^2 (Anderson-Darling series
/// with modified Bessel functions K_{1/4}).
inline double cvm_limit_cdf(double w) {
  if (w <= 0.0) return 0.0;
  double total = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double y = 4.0 * k + 1.0;
    const double q = y * y / (16.0 * w);
    const double u = std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0)) /
                     (std::pow(std::numbers::pi, 1.5) * std::sqrt(w));
    const double term = u * std::sqrt(y) * std::exp(-q) * std::cyl_bessel_k(0.25, q);
    total += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

/// D_n = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n) with the asymptotic p-value of sqrt(n) D_n.
inline TestResult ks_test(const SortedSample& s, const GEParams& p) {
  const auto xs = s.xs();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i], p);
    d = std::max({d, (i + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_sf(std::sqrt(n) * d)};
}

/// W^2 = 1/(12n) + sum (F(x_(i)) - (2i-1)/(2n))^2 with its asymptotic p-value.
inline TestResult cvm_test(const SortedSample& s, const GEParams& p) {
  const auto xs = s.xs();
  const double n = static_cast<double>(xs.size());
  double w = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = cdf(xs[i], p) - (2.0 * i + 1.0) / (2.0 * n);
    w += r * r;
  }
  return {w, 1.0 - cvm_limit_cdf(w)};
}

inline GofReport assess_fit(const SortedSample& s, const GEParams& p) {
  const auto ks = ks_test(s, p);
  const auto cvm = cvm_test(s, p);
  return {ks.stat, ks.pvalue, cvm.stat, cvm.pvalue};
}

}  // namespace gelpf
