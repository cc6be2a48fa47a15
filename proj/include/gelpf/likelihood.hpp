#pragma once

// Location-free likelihood of (alpha, beta) built from the spacings
// v_i = x_(i) - x_(1):
//
//   l_v(alpha, beta) = n! \int_0^inf exp(h_v(alpha, beta; u)) du,
//   h_v = n ln beta - n ln alpha - (1/alpha) sum c_i + (beta - 1) sum ln(1 - e^{-c_i/alpha}),
//   c_i = u + v_i.
//
// With u = alpha t and w_i = v_i / alpha this is
//
//   ln l_v = ln n! + n ln beta - (n-1) ln alpha - sum w_i + ln J,
//   J = \int_0^inf exp(-n t + (beta - 1) sum ln(1 - e^{-(t + w_i)})) dt,
//
// which is what gets integrated. The i = 1 term has w_1 = 0 and behaves like
// t^{beta-1} at the origin; the log-domain double-exponential rule absorbs it.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "gelpf/error.hpp"
#include "gelpf/numeric.hpp"
#include "gelpf/quadrature.hpp"
#include "gelpf/sample.hpp"

namespace gelpf {

struct QuadratureTolerance {
  double likelihood = 1e-10;
  double gradient = 1e-8;
};

/// ln l_v and the estimated relative error of the underlying integral.
struct LogLikValue {
  double log_value = 0.0;
  double quadrature_error = 0.0;
};

struct LogLikGradient {
  double d_alpha = 0.0;
  double d_beta = 0.0;
};

/// Value and gradient from a single quadrature pass.
struct LogLikEvaluation {
  LogLikValue value;
  LogLikGradient grad;
};

namespace detail {

// ln(1 - e^{-t}) given tau = ln t; stays accurate when t underflows.
inline double log1mexp_of_log(double tau, double t) noexcept {
  if (t < 1e-8) return tau - 0.5 * t;
  return numeric::log1mexp(t);
}

inline double check_params(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(beta)))
    throw ParameterError("likelihood requires alpha > 0 and beta > 0");
  return 0.0;
}

template <bool WithGrad>
auto evaluate_lpf(double alpha, double beta, const SortedSample& s, const QuadratureTolerance& tol) {
  check_params(alpha, beta);
  const auto vs = s.vs();
  const std::size_t n = vs.size();
  const double nd = static_cast<double>(n);
  const double bm1 = beta - 1.0;
  const double inv_alpha = 1.0 / alpha;
  const double sum_w = s.sum_spacings() * inv_alpha;

  // e^{-w_i}, reused at every node: e^{-z_i} = e^{-t} e^{-w_i}
  std::vector<double> q(n);
  for (std::size_t i = 1; i < n; ++i) q[i] = std::exp(-vs[i] * inv_alpha);

  constexpr std::size_t K = WithGrad ? 2 : 0;
  auto integrand = [&](double tau) {
    quad::LogIntegrand<K> r;
    const double t = std::exp(tau);
    const double et = std::exp(-t);
    double acc = log1mexp_of_log(tau, t);
    [[maybe_unused]] double zx = 0.0;
    if constexpr (WithGrad) zx = numeric::x_over_expm1(t);
    for (std::size_t i = 1; i < n; ++i) {
      const double z = t + vs[i] * inv_alpha;
      const double ez = et * q[i];
      const double one_m = z < std::numbers::ln2 ? -std::expm1(-z) : 1.0 - ez;
      acc += z < std::numbers::ln2 ? std::log(one_m) : std::log1p(-ez);
      // z / (e^z - 1) = z e^{-z} / (1 - e^{-z})
      if constexpr (WithGrad) zx += z * ez / one_m;
    }
    r.log_f = -nd * t + bm1 * acc;
    if constexpr (WithGrad) {
      // dh/dalpha = -n/alpha + (1/alpha) sum z_i (1 + (1 - beta)/(e^{z_i} - 1))
      r.g[0] = (-nd + nd * t + sum_w - bm1 * zx) * inv_alpha;
      // dh/dbeta = n/beta + sum ln(1 - e^{-z_i})
      r.g[1] = nd / beta + acc;
    }
    return r;
  };

  quad::DeOptions opt;
  opt.rel_tol = tol.likelihood;
  opt.moment_tol = tol.gradient;
  const double center = std::log(std::max(beta, 1e-3) / nd);
  const auto res = quad::integrate_half_line<K>(integrand, center, opt);

  LogLikValue value;
  value.log_value = std::lgamma(nd + 1.0) + nd * std::log(beta) - (nd - 1.0) * std::log(alpha) - sum_w + res.log_value;
  value.quadrature_error = res.rel_error;
  if constexpr (WithGrad) {
    return LogLikEvaluation{value, LogLikGradient{res.moments[0], res.moments[1]}};
  } else {
    return value;
  }
}

}  // namespace detail

/// ln l_v(alpha, beta) for the sample's spacings.
inline LogLikValue log_lik_v(double alpha, double beta, const SortedSample& s, const QuadratureTolerance& tol = {}) {
  return detail::evaluate_lpf<false>(alpha, beta, s, tol);
}

/// ln l_v together with its gradient (d/dalpha, d/dbeta); both integrals share one node set.
inline LogLikEvaluation log_lik_v_with_grad(double alpha, double beta, const SortedSample& s,
                                            const QuadratureTolerance& tol = {}) {
  return detail::evaluate_lpf<true>(alpha, beta, s, tol);
}

inline LogLikGradient grad_log_lik_v(double alpha, double beta, const SortedSample& s,
                                     const QuadratureTolerance& tol = {}) {
  return log_lik_v_with_grad(alpha, beta, s, tol).grad;
}

/// H_{1,n}(alpha) = (1/n) sum c_i (1 + (1 - beta)/(e^{c_i/alpha} - 1)), c_i = u + v_i.
/// The sign of d l_v / d alpha is the sign of H_{1,n}(alpha) - alpha.
inline double h1n(double alpha, double beta, double u, const SortedSample& s) {
  detail::check_params(alpha, beta);
  if (!(u > 0.0)) throw ParameterError("h1n requires u > 0");
  double acc = 0.0;
  for (double v : s.vs()) {
    const double c = u + v;
    acc += c + (1.0 - beta) * alpha * numeric::x_over_expm1(c / alpha);
  }
  return acc / static_cast<double>(s.size());
}

/// \int_0^inf (1 - (1 - e^{-y})^beta)^n dy, i.e. (E[X_(1)] - gamma) / alpha for GE samples of size n.
inline double bias_correction_integral(double beta, std::size_t n, double rel_tol = 1e-12) {
  if (!(beta > 0.0 && std::isfinite(beta))) throw ParameterError("bias correction requires beta > 0");
  if (n < 1) throw ParameterError("bias correction requires n >= 1");
  const double nd = static_cast<double>(n);
  auto integrand = [&](double tau) {
    quad::LogIntegrand<0> r;
    const double t = std::exp(tau);
    const double log_cdf = beta * detail::log1mexp_of_log(tau, t);  // ln (1 - e^{-t})^beta
    r.log_f = nd * numeric::log1mexp(-log_cdf);
    return r;
  };
  // bulk of the mass sits where (1 - e^{-y})^beta ~ 1/n
  const double q = std::min(std::pow(nd, -1.0 / beta), 0.5);
  const double center = std::log(-std::log1p(-q));
  quad::DeOptions opt;
  opt.rel_tol = rel_tol;
  return std::exp(quad::integrate_half_line<0>(integrand, center, opt).log_value);
}

}  // namespace gelpf
