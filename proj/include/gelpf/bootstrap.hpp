#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gelpf/distribution.hpp"
#include "gelpf/error.hpp"
#include "gelpf/estimators.hpp"
#include "gelpf/parallel.hpp"
#include "gelpf/rng.hpp"
#include "gelpf/sample.hpp"
#include "gelpf/stats.hpp"

namespace gelpf {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const noexcept { return lo <= o.lo && o.hi <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct LevelIntervals {
  double level = 0.95;
  Interval shape, scale, location;
  friend bool operator==(const LevelIntervals&, const LevelIntervals&) = default;
};

struct BootstrapOptions {
  std::vector<double> levels{0.95, 0.99};
  std::size_t reps = 10000;
  double beta_cutoff = 12.0;
  std::uint64_t seed = 20240101;
  unsigned threads = 1;
  LpfOptions lpf{};
};

/// Parametric percentile bootstrap of the LPF estimates.
struct BootstrapReport {
  std::vector<LevelIntervals> intervals;
  std::size_t requested = 0;
  std::size_t replicates_used = 0;
  std::size_t rejected = 0;  ///< beta_hat >= cutoff, plus failed refits
  std::size_t failed = 0;    ///< refits that raised a convergence or integration error
  double rejection_proportion = 0.0;
  double beta_cutoff = 0.0;
  std::uint64_t seed = 0;
  std::string method = "parametric-percentile";
  std::vector<std::string> warnings;

  friend bool operator==(const BootstrapReport&, const BootstrapReport&) = default;
};

inline BootstrapReport bootstrap_ci(const SortedSample& s, const LpfFit& fit, const BootstrapOptions& o) {
  if (o.reps < 100) throw ParameterError("bootstrap needs at least 100 replicates");
  if (o.levels.empty()) throw ParameterError("bootstrap needs at least one confidence level");
  for (double l : o.levels)
    if (!(l > 0.0 && l < 1.0)) throw ParameterError("confidence levels must lie in (0, 1)");
  const GEParams model = fit.params();
  model.validate();

  enum class Outcome : unsigned char { used, rejected, failed };
  struct Replicate {
    Outcome outcome = Outcome::failed;
    double alpha = 0, beta = 0, gamma = 0;
  };
  std::vector<Replicate> reps(o.reps);
  parallel_for(o.reps, o.threads, [&](std::size_t r) {
    Rng rng(derive_seed(o.seed, {r}));
    Replicate& out = reps[r];
    try {
      SortedSample boot(sample(model, s.size(), rng));
      const LpfFit f = fit_lpf(boot, o.lpf, o.beta_cutoff);
      out = {f.rejected ? Outcome::rejected : Outcome::used, f.alpha_hat, f.beta_hat, f.gamma_hat};
    } catch (const ConvergenceError&) {
      out.outcome = Outcome::failed;
    } catch (const IntegrationError&) {
      out.outcome = Outcome::failed;
    } catch (const DataError&) {  // ties from a degenerate draw
      out.outcome = Outcome::failed;
    }
  });

  BootstrapReport rep;
  rep.requested = o.reps;
  rep.beta_cutoff = o.beta_cutoff;
  rep.seed = o.seed;
  std::vector<double> a, b, g;
  for (const auto& r : reps) {
    if (r.outcome == Outcome::used) {
      a.push_back(r.alpha);
      b.push_back(r.beta);
      g.push_back(r.gamma);
    } else {
      ++rep.rejected;
      if (r.outcome == Outcome::failed) ++rep.failed;
    }
  }
  rep.replicates_used = a.size();
  rep.rejection_proportion = static_cast<double>(rep.rejected) / static_cast<double>(o.reps);
  if (rep.rejection_proportion > 0.5)
    throw DegenerateBootstrapError("more than half of the bootstrap replicates were rejected", rep.rejection_proportion);

  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::sort(g.begin(), g.end());
  std::vector<double> levels = o.levels;
  std::sort(levels.begin(), levels.end());
  for (double level : levels) {
    const double lo = 0.5 * (1.0 - level), hi = 0.5 * (1.0 + level);
    LevelIntervals li;
    li.level = level;
    li.shape = {sorted_quantile(b, lo), sorted_quantile(b, hi)};
    li.scale = {sorted_quantile(a, lo), sorted_quantile(a, hi)};
    li.location = {sorted_quantile(g, lo), sorted_quantile(g, hi)};
    if (!li.shape.contains(fit.beta_hat)) rep.warnings.push_back("shape estimate outside its " + std::to_string(level) + " interval");
    if (!li.scale.contains(fit.alpha_hat)) rep.warnings.push_back("scale estimate outside its " + std::to_string(level) + " interval");
    if (!li.location.contains(fit.gamma_hat)) rep.warnings.push_back("location estimate outside its " + std::to_string(level) + " interval");
    rep.intervals.push_back(li);
  }
  return rep;
}

}  // namespace gelpf
