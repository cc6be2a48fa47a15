#pragma once

// Double-exponential quadrature over the half line (0, inf), evaluated in the
// log domain.
//
// The integrand is supplied as a function of tau = ln t returning ln f(t) plus
// K auxiliary multipliers g_k(t). One pass over a shared node set yields
// ln \int f and the weighted averages \int g_k f / \int f. Working in ln t
// means integrable algebraic singularities at t = 0 (t^{a-1}, a > 0) never
// overflow or underflow: the exp-sinh map t = e^{c + w (pi/2) sinh x} turns
// them into doubly-exponentially decaying tails in x.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "gelpf/error.hpp"
#include "gelpf/numeric.hpp"

namespace gelpf::quad {

template <std::size_t K>
struct LogIntegrand {
  double log_f = -numeric::kInf;
  std::array<double, K> g{};
};

template <std::size_t K>
struct LogIntegral {
  double log_value = -numeric::kInf;
  std::array<double, K> moments{};
  double rel_error = 0.0;
  int levels = 0;
  std::size_t evaluations = 0;
};

struct DeOptions {
  double rel_tol = 1e-10;     ///< relative tolerance on \int f
  double moment_tol = 1e-8;   ///< tolerance on each moment, relative to its L1 mass
  int max_levels = 10;        ///< number of step halvings after the first level
  double h0 = 0.5;            ///< step of the first level in the x coordinate
  double tail_drop = 55.0;    ///< log-units below the peak at which tails are truncated
};

namespace detail {

inline constexpr double half_pi = 0.5 * std::numbers::pi;
inline constexpr double x_limit = 24.0;

template <std::size_t K>
struct Node {
  double lam;  // ln of integrand times Jacobian at x
  std::array<double, K> g;
};

// Map tau = center + width * (pi/2) sinh x.
struct Map {
  double center;
  double width = 1.0;
  double tau(double x) const { return center + width * half_pi * std::sinh(x); }
  double log_jacobian(double x) const { return std::log(width * half_pi * std::cosh(x)); }
};

template <std::size_t K, class F>
Node<K> eval_node(F& f, const Map& m, double x) {
  const double tau = m.tau(x);
  LogIntegrand<K> r = f(tau);
  double lam = r.log_f + tau + m.log_jacobian(x);
  if (std::isnan(lam)) lam = -numeric::kInf;
  return {lam, r.g};
}

// Walks outward from x = 0 with step h until the integrand has dropped
// `drop` log-units below the running peak and is still decreasing.
template <std::size_t K, class F, class Sink>
void sweep(F& f, const Map& m, double h, double drop, Sink&& sink, double& lo, double& hi, double& peak) {
  auto walk = [&](int dir) {
    double prev = numeric::kInf;
    for (int k = dir > 0 ? 0 : -1;; k += dir) {
      const double x = k * h;
      if (std::abs(x) > x_limit) break;
      Node<K> nd = eval_node<K>(f, m, x);
      sink(x, nd);
      peak = std::max(peak, nd.lam);
      if (dir > 0) hi = x; else lo = x;
      if (nd.lam < peak - drop && nd.lam <= prev) break;
      prev = nd.lam;
    }
  };
  walk(+1);
  walk(-1);
}

}  // namespace detail

/// Integrates f over (0, inf). `log_center` is a rough guess of ln t at the bulk
/// of the mass; a coarse scan and a local probe refine it and fix the width w.
template <std::size_t K, class F>
LogIntegral<K> integrate_half_line(F&& f, double log_center, const DeOptions& opt = {}) {
  using detail::half_pi;
  LogIntegral<K> out;

  detail::Map map{log_center};

  // Coarse scan to re-center the map on the peak of t f(t) in ln t.
  {
    std::vector<std::pair<double, double>> pts;
    double lo = 0, hi = 0, peak = -numeric::kInf;
    detail::sweep<K>(f, map, 1.0, opt.tail_drop, [&](double x, const detail::Node<K>& nd) {
      pts.emplace_back(x, nd.lam - map.log_jacobian(x));
    }, lo, hi, peak);
    out.evaluations += pts.size();
    std::sort(pts.begin(), pts.end());
    auto best = std::max_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.second < b.second; });
    if (best != pts.end() && std::isfinite(best->second)) {
      double xs = best->first;
      if (best != pts.begin() && best + 1 != pts.end()) {
        const double ym = (best - 1)->second, y0 = best->second, yp = (best + 1)->second;
        const double den = ym - 2.0 * y0 + yp;
        if (std::isfinite(den) && den < 0.0) xs += std::clamp(0.5 * (ym - yp) / den, -0.5, 0.5);
      }
      map.center = map.tau(xs);
    }
  }

  // Local probe of ln(t f(t)) around the center: parabolic steps refine the
  // center, and the curvature sets the map width so that sharp peaks span
  // several nodes at the first level.
  {
    auto g = [&](double tau) {
      const double v = f(tau).log_f + tau;
      ++out.evaluations;
      return std::isnan(v) ? -numeric::kInf : v;
    };
    double c = map.center, d = 0.5, f0 = g(c);
    double sigma = 1.0;
    for (int it = 0; it < 80 && std::isfinite(f0); ++it) {
      const double fm = g(c - d), fp = g(c + d);
      if (fm > f0 || fp > f0) {
        c += fp > fm ? d : -d;
        f0 = std::max(fm, fp);
        continue;
      }
      const double den = fm - 2.0 * f0 + fp;
      if (!std::isfinite(den) || f0 - std::max(fm, fp) > 8.0) {
        if (d < 1e-12) break;
        d *= 0.25;
        continue;
      }
      if (den < 0.0) {
        const double shift = std::clamp(0.5 * d * (fm - fp) / den, -d, d);
        sigma = d / std::sqrt(-den);
        if (std::abs(shift) <= 0.25 * d) {
          c += shift;
          break;
        }
        const double fs = g(c + shift);
        if (fs > f0) {
          c += shift;
          f0 = fs;
          continue;
        }
      }
      break;
    }
    if (std::isfinite(f0)) {
      map.center = c;
      map.width = std::clamp(4.0 * sigma, 1e-10, 1.0);
    }
  }

  struct Acc {
    double s = 0.0;
    std::array<double, K> m{};
    std::array<double, K> l1{};
  };

  double h = opt.h0;
  double lo = 0, hi = 0, peak = -numeric::kInf;
  std::vector<detail::Node<K>> first;
  std::vector<double> first_x;
  detail::sweep<K>(f, map, h, opt.tail_drop, [&](double x, const detail::Node<K>& nd) {
    first.push_back(nd);
    first_x.push_back(x);
  }, lo, hi, peak);
  out.evaluations += first.size();
  if (!std::isfinite(peak)) throw IntegrationError("integrand is zero or non-finite everywhere", numeric::kInf);
  double offset = peak;

  Acc acc;
  double prev_i = 0.0;
  std::array<double, K> prev_m{};
  auto add = [&](const detail::Node<K>& nd) {
    // A finer level can land on a sharper peak than the first sweep saw.
    if (nd.lam > offset) {
      const double r = std::exp(offset - nd.lam);
      acc.s *= r;
      prev_i *= r;
      for (std::size_t k = 0; k < K; ++k) {
        acc.m[k] *= r;
        acc.l1[k] *= r;
        prev_m[k] *= r;
      }
      offset = nd.lam;
    }
    const double e = std::exp(nd.lam - offset);
    if (e == 0.0) return;
    acc.s += e;
    for (std::size_t k = 0; k < K; ++k) {
      acc.m[k] += e * nd.g[k];
      acc.l1[k] += e * std::abs(nd.g[k]);
    }
  };
  for (const auto& nd : first) add(nd);

  prev_i = acc.s * h;
  for (std::size_t k = 0; k < K; ++k) prev_m[k] = acc.m[k] * h;

  // Each halving roughly doubles the number of correct digits, so the error of
  // the finer sum is estimated as d_m * (d_m / d_{m-1}) with d_m = |I_m - I_{m-1}|.
  auto extrapolate = [](double d, double d_prev) { return d_prev > 0.0 ? d * std::min(1.0, d / d_prev) : d; };
  double err = numeric::kInf;
  double diff_prev = 0.0;
  std::array<double, K> mdiff_prev{};
  int level = 0;
  for (; level < opt.max_levels; ++level) {
    h *= 0.5;
    const long kmin = static_cast<long>(std::floor(lo / h));
    const long kmax = static_cast<long>(std::ceil(hi / h));
    for (long k = kmin; k <= kmax; ++k) {
      if ((k & 1) == 0) continue;
      add(detail::eval_node<K>(f, map, k * h));
      ++out.evaluations;
    }
    const double cur_i = acc.s * h;
    const double diff = std::abs(cur_i - prev_i) / cur_i;
    err = level == 0 ? diff : extrapolate(diff, diff_prev);
    diff_prev = diff;
    bool moments_ok = true;
    for (std::size_t k = 0; k < K; ++k) {
      const double cur = acc.m[k] * h;
      const double scale = acc.l1[k] * h + 1e-300;
      const double d = std::abs(cur - prev_m[k]) / scale;
      const double e = level == 0 ? d : extrapolate(d, mdiff_prev[k]);
      if (e > opt.moment_tol) moments_ok = false;
      mdiff_prev[k] = d;
      prev_m[k] = cur;
    }
    prev_i = cur_i;
    if (level >= 1 && err <= opt.rel_tol && moments_ok) {
      ++level;
      break;
    }
  }
  if (!(err <= opt.rel_tol)) throw IntegrationError("double-exponential quadrature did not converge", err);

  out.log_value = offset + std::log(acc.s * h);
  for (std::size_t k = 0; k < K; ++k) out.moments[k] = acc.m[k] / acc.s;
  out.rel_error = err;
  out.levels = level;
  return out;
}

}  // namespace gelpf::quad
