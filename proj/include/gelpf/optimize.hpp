#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace gelpf::opt {

template <std::size_t N>
using Point = std::array<double, N>;

struct NelderMeadOptions {
  double initial_step = 0.25;  ///< simplex edge along each coordinate
  double xtol = 1e-7;          ///< simplex diameter (max-norm) at which to stop
  double ftol = 1e-11;         ///< spread of vertex values, relative to |f_best| + 1
  std::size_t max_evals = 2000;
};

template <std::size_t N>
struct NelderMeadResult {
  Point<N> x{};
  double value = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Minimizes f with the Nelder-Mead simplex method (standard coefficients
/// 1, 2, 1/2, 1/2). Non-finite values are treated as +inf, which lets callers
/// encode box constraints by returning infinity outside the feasible set.
template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F&& f, Point<N> start, const NelderMeadOptions& opt = {}) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  NelderMeadResult<N> res;
  auto eval = [&](const Point<N>& p) {
    ++res.evals;
    const double v = f(p);
    return std::isnan(v) ? inf : v;
  };

  std::array<Point<N>, N + 1> simplex;
  std::array<double, N + 1> fv;
  simplex[0] = start;
  fv[0] = eval(start);
  for (std::size_t j = 0; j < N; ++j) {
    simplex[j + 1] = start;
    simplex[j + 1][j] += opt.initial_step;
    fv[j + 1] = eval(simplex[j + 1]);
  }

  std::array<std::size_t, N + 1> idx;
  auto affine = [](const Point<N>& a, const Point<N>& b, double t) {
    Point<N> r;
    for (std::size_t k = 0; k < N; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };

  while (res.evals < opt.max_evals) {
    for (std::size_t j = 0; j <= N; ++j) idx[j] = j;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = idx[0], worst = idx[N], second = idx[N - 1];

    double diam = 0.0;
    for (std::size_t j = 1; j <= N; ++j)
      for (std::size_t k = 0; k < N; ++k) diam = std::max(diam, std::abs(simplex[idx[j]][k] - simplex[best][k]));
    const double spread = fv[worst] - fv[best];
    if (std::isfinite(fv[best]) && diam <= opt.xtol && spread <= opt.ftol * (std::abs(fv[best]) + 1.0)) {
      res.converged = true;
      break;
    }
    ++res.iterations;

    Point<N> centroid{};
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k) centroid[k] += simplex[idx[j]][k] / static_cast<double>(N);

    const Point<N> xr = affine(centroid, simplex[worst], -1.0);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      const Point<N> xe = affine(centroid, simplex[worst], -2.0);
      const double fe = eval(xe);
      if (fe < fr) { simplex[worst] = xe; fv[worst] = fe; }
      else { simplex[worst] = xr; fv[worst] = fr; }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const Point<N> xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, simplex[worst], 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t j = 1; j <= N; ++j) {
      simplex[idx[j]] = affine(simplex[best], simplex[idx[j]], 0.5);
      fv[idx[j]] = eval(simplex[idx[j]]);
    }
  }

  const std::size_t b = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  res.x = simplex[b];
  res.value = fv[b];
  return res;
}

}  // namespace gelpf::opt
