#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gelpf/error.hpp"
#include "gelpf/numeric.hpp"
#include "gelpf/rng.hpp"

namespace gelpf {

/// A value in [0, 1]. Construction validates.
class Probability {
public:
  constexpr Probability() = default;
  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0))
      throw ParameterError("probability must lie in [0, 1], got " + std::to_string(value));
  }

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

private:
  double value_ = 0.0;
};

/// Parameters of the three-parameter generalized exponential distribution
/// GE(alpha, beta, gamma): scale alpha > 0, shape beta > 0, location gamma.
struct GEParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.0;

  bool valid() const noexcept {
    return alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma);
  }

  void validate() const {
    if (!valid())
      throw ParameterError("invalid GE parameters (alpha=" + std::to_string(alpha) + ", beta=" + std::to_string(beta) +
                           ", gamma=" + std::to_string(gamma) + ")");
  }

  friend bool operator==(const GEParams&, const GEParams&) = default;
};

/// F(x) = (1 - exp(-(x - gamma)/alpha))^beta for x > gamma, 0 otherwise.
inline double cdf(double x, const GEParams& p) {
  p.validate();
  if (!(x > p.gamma)) return 0.0;
  const double z = (x - p.gamma) / p.alpha;
  return std::exp(p.beta * numeric::log1mexp(z));
}

/// Density (beta/alpha) e^{-z} (1 - e^{-z})^{beta-1}, z = (x - gamma)/alpha.
/// At x == gamma exactly with beta < 1 the density is unbounded and +inf is returned.
inline double pdf(double x, const GEParams& p) {
  p.validate();
  if (x < p.gamma) return 0.0;
  if (x == p.gamma) return p.beta < 1.0 ? numeric::kInf : 0.0;
  const double z = (x - p.gamma) / p.alpha;
  return std::exp(std::log(p.beta / p.alpha) - z + (p.beta - 1.0) * numeric::log1mexp(z));
}

/// log density; -inf outside the support.
inline double log_pdf(double x, const GEParams& p) {
  if (!(x > p.gamma)) return x == p.gamma && p.beta < 1.0 ? numeric::kInf : -numeric::kInf;
  const double z = (x - p.gamma) / p.alpha;
  return std::log(p.beta / p.alpha) - z + (p.beta - 1.0) * numeric::log1mexp(z);
}

/// x_zeta = gamma - alpha ln(1 - zeta^{1/beta}); zeta = 0 gives gamma, zeta = 1 diverges.
inline double quantile(double zeta, const GEParams& p) {
  p.validate();
  if (!(zeta >= 0.0 && zeta < 1.0))
    throw ParameterError("quantile level must lie in [0, 1), got " + std::to_string(zeta));
  if (zeta == 0.0) return p.gamma;
  // zeta^{1/beta} = exp(-y), y = -ln(zeta)/beta
  const double y = -std::log(zeta) / p.beta;
  return p.gamma - p.alpha * numeric::log1mexp(y);
}

/// n i.i.d. draws by inverse transform.
inline std::vector<double> sample(const GEParams& p, std::size_t n, Rng& rng) {
  p.validate();
  std::vector<double> out(n);
  for (auto& x : out) {
    const double y = -std::log(rng.uniform_open()) / p.beta;
    x = p.gamma - p.alpha * numeric::log1mexp(y);
  }
  return out;
}

}  // namespace gelpf
