#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gelpf/distribution.hpp"
#include "gelpf/error.hpp"
#include "gelpf/likelihood.hpp"
#include "gelpf/optimize.hpp"
#include "gelpf/rng.hpp"
#include "gelpf/sample.hpp"

namespace gelpf {

struct LpfOptions {
  QuadratureTolerance quadrature{};
  double grad_tol = 1e-6;        ///< norm of the gradient in (ln alpha, ln beta)
  double rel_loglik_tol = 1e-10; ///< relative change of ln l_v on the last accepted step
  std::size_t max_polish_iters = 40;
  double beta_ceiling = 1e5;     ///< shapes beyond this are treated as a runaway
  bool gamma_nonneg = false;     ///< clamp the location estimate at 0
  opt::NelderMeadOptions simplex{0.3, 1e-3, 1e-9, 400};
};

/// Result of the location-parameter-free fit.
struct LpfFit {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double gamma_init = 0.0;  ///< x_(1)
  double gamma_hat = 0.0;   ///< bias-corrected location
  double loglik_at_max = 0.0;
  double grad_norm = 0.0;   ///< in (ln alpha, ln beta) at the returned point
  std::size_t optimizer_iters = 0;
  std::size_t likelihood_evals = 0;
  bool converged = false;
  bool rejected = false;    ///< beta_hat >= beta cutoff
  bool gamma_clamped = false;
  bool multimodal_suspected = false;
  double beta_cutoff = std::numeric_limits<double>::infinity();
  std::size_t n = 0;
  std::vector<std::string> trace;

  GEParams params() const { return {alpha_hat, beta_hat, gamma_hat}; }
};

struct MleOptions {
  double standoff_fraction = 1e-6;  ///< gamma <= x_(1) - standoff_fraction * (x_(n) - x_(1))
  std::size_t max_restarts = 6;
  opt::NelderMeadOptions simplex{0.2, 1e-9, 1e-13, 6000};
};

/// Full three-parameter likelihood fit restricted to beta >= 1.
struct MleFit {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double gamma_hat = 0.0;
  double loglik_at_max = 0.0;
  std::size_t evals = 0;
  bool converged = false;
  bool beta_at_bound = false;   ///< beta_hat clamped at 1
  bool gamma_at_bound = false;  ///< gamma_hat at x_(1) - standoff

  GEParams params() const { return {alpha_hat, beta_hat, gamma_hat}; }
};

namespace detail {

struct PolishState {
  opt::Point<2> y{};
  double f = -numeric::kInf;
  opt::Point<2> g{};
  double gnorm = numeric::kInf;
  bool converged = false;
  bool runaway = false;
  std::size_t iters = 0;
  std::size_t evals = 0;
};

inline double norm2(const opt::Point<2>& v) { return std::hypot(v[0], v[1]); }

// Newton ascent in (ln alpha, ln beta) with a finite-difference Hessian of the
// analytic gradient; falls back to scaled gradient ascent when the Hessian is
// not negative definite.
inline PolishState polish_lpf(const SortedSample& s, opt::Point<2> y, const LpfOptions& o,
                              std::vector<std::string>& trace) {
  PolishState st;
  const double log_ceiling = std::log(o.beta_ceiling);
  auto eval_grad = [&](const opt::Point<2>& p, double& f, opt::Point<2>& g) {
    const double a = std::exp(p[0]), b = std::exp(p[1]);
    const auto e = log_lik_v_with_grad(a, b, s, o.quadrature);
    ++st.evals;
    f = e.value.log_value;
    g = {a * e.grad.d_alpha, b * e.grad.d_beta};
    if (!std::isfinite(f) || !std::isfinite(g[0]) || !std::isfinite(g[1]))
      throw IntegrationError("non-finite likelihood or gradient", numeric::kInf);
  };

  st.y = y;
  eval_grad(st.y, st.f, st.g);
  st.gnorm = norm2(st.g);
  double last_change = numeric::kInf;
  for (; st.iters < o.max_polish_iters; ++st.iters) {
    if (st.y[1] > log_ceiling) {
      st.runaway = true;
      trace.push_back("polish: shape exceeded ceiling");
      return st;
    }
    if (st.gnorm < o.grad_tol && (st.iters == 0 || last_change <= o.rel_loglik_tol)) {
      st.converged = true;
      return st;
    }
    constexpr double h = 1e-4;
    std::array<opt::Point<2>, 2> cols{};
    for (int j = 0; j < 2; ++j) {
      opt::Point<2> yp = st.y;
      yp[j] += h;
      double fp;
      opt::Point<2> gp;
      try {
        eval_grad(yp, fp, gp);
      } catch (const IntegrationError&) {
        continue;  // leaves a zero column, so the step below falls back to the gradient
      }
      cols[j] = {(gp[0] - st.g[0]) / h, (gp[1] - st.g[1]) / h};
    }
    const double haa = cols[0][0], hbb = cols[1][1], hab = 0.5 * (cols[0][1] + cols[1][0]);
    const double det = haa * hbb - hab * hab;
    opt::Point<2> d;
    if (haa < 0.0 && det > 0.0) {
      d = {-(hbb * st.g[0] - hab * st.g[1]) / det, -(-hab * st.g[0] + haa * st.g[1]) / det};
    } else {
      const double scale = 1.0 / std::max({std::abs(haa), std::abs(hbb), 1.0});
      d = {st.g[0] * scale, st.g[1] * scale};
    }
    const double dn = norm2(d);
    if (dn > 2.0) d = {2.0 * d[0] / dn, 2.0 * d[1] / dn};

    bool accepted = false;
    for (double step = 1.0; step > 1e-10; step *= 0.5) {
      const opt::Point<2> yn{st.y[0] + step * d[0], st.y[1] + step * d[1]};
      if (std::abs(yn[0] - y[0]) > 40.0 || yn[1] > log_ceiling + 1.0 || yn[1] < -40.0) continue;
      double fn;
      opt::Point<2> gn;
      try {
        eval_grad(yn, fn, gn);
      } catch (const IntegrationError&) {
        continue;
      }
      const double gnn = norm2(gn);
      const double noise = 1e-12 * (1.0 + std::abs(st.f));
      if (fn > st.f || (fn >= st.f - noise && gnn < st.gnorm)) {
        last_change = std::abs(fn - st.f) / (1.0 + std::abs(st.f));
        st.y = yn;
        st.f = fn;
        st.g = gn;
        st.gnorm = gnn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "polish: line search stalled at ln(alpha)=" << st.y[0] << " ln(beta)=" << st.y[1]
          << " |grad|=" << st.gnorm;
      trace.push_back(msg.str());
      // Stalled exactly at a stationary point within quadrature noise.
      st.converged = st.gnorm < o.grad_tol;
      return st;
    }
  }
  st.converged = st.gnorm < o.grad_tol && last_change <= o.rel_loglik_tol;
  if (!st.converged) trace.push_back("polish: iteration limit reached");
  return st;
}

inline PolishState maximize_lpf(const SortedSample& s, opt::Point<2> start, const LpfOptions& o,
                                std::vector<std::string>& trace, std::size_t& iters) {
  const double log_ceiling = std::log(o.beta_ceiling);
  std::size_t evals = 0;
  auto objective = [&](const opt::Point<2>& y) {
    if (y[1] > log_ceiling + 1.0 || y[1] < -40.0 || std::abs(y[0] - start[0]) > 40.0) return numeric::kInf;
    ++evals;
    try {
      return -log_lik_v(std::exp(y[0]), std::exp(y[1]), s, o.quadrature).log_value;
    } catch (const IntegrationError&) {
      return numeric::kInf;
    }
  };
  const auto nm = opt::nelder_mead<2>(objective, start, o.simplex);
  iters += nm.iterations;
  std::ostringstream msg;
  msg << "simplex: " << nm.iterations << " iterations, " << nm.evals << " evaluations, ln l_v=" << -nm.value;
  trace.push_back(msg.str());
  PolishState st = polish_lpf(s, nm.x, o, trace);
  st.evals += evals;
  iters += st.iters;
  return st;
}

}  // namespace detail

/// Location-parameter-free estimation: (alpha, beta) maximize ln l_v over the
/// spacings, gamma_init = x_(1), and gamma_hat = x_(1) - alpha_hat * B(beta_hat, n)
/// with B the bias-correction integral. Fits with beta_hat >= beta_cutoff are
/// flagged `rejected`; other non-converged fits raise ConvergenceError.
inline LpfFit fit_lpf(const SortedSample& s, const LpfOptions& o = {},
                      double beta_cutoff = std::numeric_limits<double>::infinity()) {
  if (!(beta_cutoff > 0.0)) throw ParameterError("beta cutoff must be positive");
  if (o.gamma_nonneg && s.min() < 0.0)
    throw DataError("gamma >= 0 requested but the sample has negative observations");
  LpfFit fit;
  fit.n = s.size();
  fit.beta_cutoff = beta_cutoff;
  fit.gamma_init = s.min();

  const double alpha0 = s.stddev();
  std::size_t iters = 0;
  detail::PolishState st = detail::maximize_lpf(s, {std::log(alpha0), 0.0}, o, fit.trace, iters);
  std::size_t evals = st.evals;

  if (!st.converged && !st.runaway) {
    fit.trace.push_back("restarting from 5x5 grid");
    // 5x5 log-grid over (alpha0/10, 10 alpha0) x (0.1, 10); start from its best node.
    opt::Point<2> best_start{};
    double best = -numeric::kInf;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const opt::Point<2> y{std::log(alpha0) + std::log(10.0) * (i - 2) / 2.0, std::log(10.0) * (j - 2) / 2.0};
        try {
          const double f = log_lik_v(std::exp(y[0]), std::exp(y[1]), s, o.quadrature).log_value;
          ++evals;
          if (f > best) { best = f; best_start = y; }
        } catch (const IntegrationError&) {
        }
      }
    detail::PolishState alt = detail::maximize_lpf(s, best_start, o, fit.trace, iters);
    evals += alt.evals;
    if (alt.converged && st.converged && detail::norm2({alt.y[0] - st.y[0], alt.y[1] - st.y[1]}) > 1e-3)
      fit.multimodal_suspected = true;
    if (alt.f > st.f || (alt.converged && !st.converged && alt.f >= st.f - 1e-9 * (1 + std::abs(st.f)))) st = alt;
  }

  fit.alpha_hat = std::exp(st.y[0]);
  fit.beta_hat = std::exp(st.y[1]);
  fit.loglik_at_max = st.f;
  fit.grad_norm = st.gnorm;
  fit.optimizer_iters = iters;
  fit.likelihood_evals = evals;
  fit.converged = st.converged;
  fit.rejected = fit.beta_hat >= beta_cutoff;

  if (!fit.converged && !fit.rejected) {
    std::ostringstream msg;
    if (st.runaway)
      msg << "shape estimate diverged past " << o.beta_ceiling
          << " (likelihood increases without bound in beta); set a beta cutoff to flag such fits as rejected";
    else
      msg << "LPF optimizer did not converge (alpha=" << fit.alpha_hat << ", beta=" << fit.beta_hat
          << ", |grad|=" << fit.grad_norm << ")";
    throw ConvergenceError(msg.str(), fit.trace);
  }

  const double shape_for_correction = std::min(fit.beta_hat, o.beta_ceiling);
  fit.gamma_hat = s.min() - fit.alpha_hat * bias_correction_integral(shape_for_correction, s.size());
  if (o.gamma_nonneg && fit.gamma_hat < 0.0) {
    fit.gamma_hat = 0.0;
    fit.gamma_clamped = true;
  }
  return fit;
}

/// Plug-in quantile gamma_hat - alpha_hat ln(1 - zeta^{1/beta_hat}); zeta = 0 gives gamma_hat.
inline double quantile_plugin(const LpfFit& fit, double zeta) { return quantile(zeta, fit.params()); }

namespace detail {

inline double mle_neg_loglik(std::span<const double> xs, double alpha, double beta, double gamma) {
  const double n = static_cast<double>(xs.size());
  double acc = n * std::log(beta / alpha);
  const double bm1 = beta - 1.0;
  for (double x : xs) {
    const double z = (x - gamma) / alpha;
    acc += -z + bm1 * numeric::log1mexp(z);
  }
  return -acc;
}

}  // namespace detail

/// Ordinary maximum likelihood over alpha > 0, beta >= 1, gamma <= x_(1) - delta.
inline MleFit fit_mle(const SortedSample& s, const MleOptions& o = {}) {
  const auto xs = s.xs();
  const double spread = s.max() - s.min();
  const double delta = o.standoff_fraction * spread;
  auto unpack = [&](const opt::Point<3>& y, double& a, double& b, double& g) {
    a = std::exp(y[0]);
    b = std::max(y[1], 1.0);
    g = s.min() - std::max(spread * std::exp(y[2]), delta);
  };
  MleFit fit;
  auto objective = [&](const opt::Point<3>& y) {
    if (std::abs(y[0]) > 700.0 || y[1] > 1e6 || y[2] > 700.0) return numeric::kInf;
    double a, b, g;
    unpack(y, a, b, g);
    return detail::mle_neg_loglik(xs, a, b, g);
  };

  opt::Point<3> y{std::log(s.stddev()), 1.5, std::log(1.0 / static_cast<double>(s.size()))};
  double best = numeric::kInf;
  bool converged = false;
  for (std::size_t r = 0; r <= o.max_restarts; ++r) {
    const auto nm = opt::nelder_mead<3>(objective, y, o.simplex);
    fit.evals += nm.evals;
    const bool improved = nm.value < best - 1e-12 * (1.0 + std::abs(best));
    y = nm.x;
    best = std::min(best, nm.value);
    converged = nm.converged;
    if (!improved && r > 0) break;
  }

  double a, b, g;
  unpack(y, a, b, g);
  fit.alpha_hat = a;
  fit.beta_hat = b;
  fit.gamma_hat = g;
  fit.loglik_at_max = -best;
  fit.converged = converged;
  fit.beta_at_bound = y[1] <= 1.0;
  fit.gamma_at_bound = spread * std::exp(y[2]) <= delta;
  return fit;
}

/// Log-likelihood of the full three-parameter model (for comparing MLE candidates).
inline double full_loglik(const SortedSample& s, const GEParams& p) {
  p.validate();
  if (!(p.gamma < s.min())) return -numeric::kInf;
  return -detail::mle_neg_loglik(s.xs(), p.alpha, p.beta, p.gamma);
}

/// Empirical P(X_(1) - gamma > epsilon) next to the bound exp(-n (epsilon/alpha)^beta).
struct TailCheck {
  double empirical = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  double exact = 0.0;  ///< (1 - F(gamma + epsilon))^n
};

inline TailCheck min_stat_tail_check(const GEParams& p, std::size_t n, double epsilon, std::size_t reps,
                                     std::uint64_t seed) {
  p.validate();
  if (n == 0 || reps == 0 || !(epsilon > 0.0)) throw ParameterError("tail check needs n, reps, epsilon > 0");
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto xs = sample(p, n, rng);
    if (*std::min_element(xs.begin(), xs.end()) - p.gamma > epsilon) ++hits;
  }
  TailCheck tc;
  tc.empirical = static_cast<double>(hits) / static_cast<double>(reps);
  tc.std_error = std::sqrt(tc.empirical * (1.0 - tc.empirical) / static_cast<double>(reps));
  tc.bound = std::exp(-static_cast<double>(n) * std::pow(epsilon / p.alpha, p.beta));
  tc.exact = std::exp(static_cast<double>(n) * numeric::log1mexp(-p.beta * numeric::log1mexp(epsilon / p.alpha)));
  return tc;
}

}  // namespace gelpf
