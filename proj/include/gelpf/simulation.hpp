#pragma once

// Monte Carlo bias/RMSE harness. Every replicate draws its sample from a stream
// keyed by (master seed, beta, n, replicate), so all methods in a cell see the
// same datasets and results do not depend on thread scheduling or grid order.
// Fits with beta_hat >= beta_U count towards the rejection proportion p and are
// excluded from bias and RMSE, as are refits that fail to converge.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gelpf/distribution.hpp"
#include "gelpf/error.hpp"
#include "gelpf/estimators.hpp"
#include "gelpf/parallel.hpp"
#include "gelpf/rng.hpp"
#include "gelpf/sample.hpp"

namespace gelpf {

enum class Method { lpf, mle };

inline std::string to_string(Method m) { return m == Method::lpf ? "LPF" : "MLE"; }

inline Method method_from_string(const std::string& s) {
  if (s == "lpf" || s == "LPF") return Method::lpf;
  if (s == "mle" || s == "MLE") return Method::mle;
  throw ParameterError("unknown method '" + s + "' (expected lpf or mle)");
}

/// Standard error of the mean of replicate-level values over `reps` replicates.
inline double mc_standard_error(std::span<const double> values, std::size_t reps) {
  if (reps < 2 || values.empty()) throw ParameterError("standard error needs at least 2 replicates");
  const double m = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()) / static_cast<double>(reps));
}

inline std::map<double, double> default_beta_cutoffs() {
  return {{0.50, 2.0}, {0.75, 5.0}, {1.00, 8.0}, {1.50, 12.0}, {2.00, 20.0}, {3.00, 30.0}};
}

inline std::vector<double> default_zeta_grid() { return {0.01, 0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95, 0.99}; }

struct SimConfig {
  double alpha = 1.0;
  double gamma = 0.0;
  std::vector<double> beta_grid{0.50, 0.75, 1.00, 1.50, 2.00, 3.00};
  std::vector<std::size_t> n_grid{20, 50, 100, 200};
  std::size_t reps = 2000;
  std::map<double, double> beta_cutoff = default_beta_cutoffs();
  std::vector<double> zeta_grid = default_zeta_grid();
  std::vector<Method> methods{Method::lpf};
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  LpfOptions lpf{};
  MleOptions mle{};

  void validate() const {
    if (reps < 1) throw ParameterError("reps must be >= 1");
    if (beta_grid.empty() || n_grid.empty() || methods.empty()) throw ParameterError("grids must be non-empty");
    GEParams{alpha, 1.0, gamma}.validate();
    for (double b : beta_grid) {
      if (!(b > 0.0)) throw ParameterError("beta grid values must be positive");
      if (!beta_cutoff.contains(b)) throw ParameterError("no beta_U cutoff for beta = " + std::to_string(b));
    }
    for (std::size_t n : n_grid)
      if (n < SortedSample::min_size) throw ParameterError("sample sizes must be >= 3");
    for (double z : zeta_grid)
      if (!(z >= 0.0 && z < 1.0)) throw ParameterError("zeta grid values must lie in [0, 1)");
  }
};

/// Bias and RMSE of one estimator, with Monte Carlo standard errors
/// (RMSE's by the delta method on the mean squared error).
struct Metric {
  double true_value = 0.0;
  double bias = 0.0;
  double rmse = 0.0;
  double bias_se = 0.0;
  double rmse_se = 0.0;
};

struct QuantileMetric {
  double zeta = 0.0;
  Metric metric;
};

struct CellResult {
  Method method = Method::lpf;
  double beta = 0.0;
  double beta_cutoff = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t retained = 0;
  std::size_t rejected = 0;
  std::size_t failed = 0;
  double p = 0.0;  ///< rejected / reps
  bool valid = true;
  std::string diagnostic;
  Metric shape, scale, location;
  std::vector<QuantileMetric> quantiles;
  double seconds = 0.0;

  const QuantileMetric* quantile(double zeta) const {
    for (const auto& q : quantiles)
      if (std::abs(q.zeta - zeta) < 1e-12) return &q;
    return nullptr;
  }
};

struct SimReport {
  std::string note = "replicates with beta_hat >= beta_U are counted in p and excluded from bias/RMSE; "
                     "failed fits are excluded and counted separately";
  std::uint64_t master_seed = 0;
  std::vector<CellResult> cells;

  const CellResult* find(Method m, double beta, std::size_t n) const {
    for (const auto& c : cells)
      if (c.method == m && std::abs(c.beta - beta) < 1e-12 && c.n == n) return &c;
    return nullptr;
  }
};

inline Metric summarize_errors(std::span<const double> estimates, double truth) {
  Metric m;
  m.true_value = truth;
  const double k = static_cast<double>(estimates.size());
  if (estimates.empty()) return m;
  std::vector<double> err(estimates.size()), sq(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    err[i] = estimates[i] - truth;
    sq[i] = err[i] * err[i];
  }
  m.bias = std::accumulate(err.begin(), err.end(), 0.0) / k;
  const double mse = std::accumulate(sq.begin(), sq.end(), 0.0) / k;
  m.rmse = std::sqrt(mse);
  if (estimates.size() >= 2) {
    m.bias_se = mc_standard_error(err, estimates.size());
    m.rmse_se = m.rmse > 0.0 ? mc_standard_error(sq, estimates.size()) / (2.0 * m.rmse) : 0.0;
  }
  return m;
}

/// Runs one (beta, n) cell for every configured method.
inline std::vector<CellResult> run_cell(const SimConfig& cfg, double beta, std::size_t n) {
  const GEParams truth{cfg.alpha, beta, cfg.gamma};
  const double cutoff = cfg.beta_cutoff.at(beta);
  const std::size_t nm = cfg.methods.size();

  struct Estimate {
    enum class Status : unsigned char { used, rejected, failed } status = Status::failed;
    GEParams params{};
  };
  std::vector<Estimate> est(cfg.reps * nm);
  std::vector<double> seconds(nm, 0.0);

  parallel_for(cfg.reps, cfg.threads, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.master_seed, {std::bit_cast<std::uint64_t>(beta), n, r}));
    const auto xs = sample(truth, n, rng);
    std::optional<SortedSample> s;
    try {
      s.emplace(xs);
    } catch (const DataError&) {
      return;  // ties: every method fails on this replicate
    }
    for (std::size_t m = 0; m < nm; ++m) {
      Estimate& e = est[r * nm + m];
      try {
        if (cfg.methods[m] == Method::lpf) {
          const LpfFit f = fit_lpf(*s, cfg.lpf, cutoff);
          e.params = f.params();
        } else {
          const MleFit f = fit_mle(*s, cfg.mle);
          e.params = f.params();
          if (!f.converged) { e.status = Estimate::Status::failed; continue; }
        }
        e.status = e.params.beta >= cutoff ? Estimate::Status::rejected : Estimate::Status::used;
      } catch (const ConvergenceError&) {
        e.status = Estimate::Status::failed;
      } catch (const IntegrationError&) {
        e.status = Estimate::Status::failed;
      }
    }
  });

  std::vector<CellResult> out;
  for (std::size_t m = 0; m < nm; ++m) {
    const auto t0 = std::chrono::steady_clock::now();
    CellResult c;
    c.method = cfg.methods[m];
    c.beta = beta;
    c.beta_cutoff = cutoff;
    c.n = n;
    c.reps = cfg.reps;
    std::vector<GEParams> kept;
    for (std::size_t r = 0; r < cfg.reps; ++r) {
      const Estimate& e = est[r * nm + m];
      if (e.status == Estimate::Status::used) kept.push_back(e.params);
      else if (e.status == Estimate::Status::rejected) ++c.rejected;
      else ++c.failed;
    }
    c.retained = kept.size();
    c.p = static_cast<double>(c.rejected) / static_cast<double>(cfg.reps);
    if (kept.empty()) {
      c.valid = false;
      c.diagnostic = "all replicates rejected or failed";
      out.push_back(std::move(c));
      continue;
    }
    std::vector<double> a, b, g;
    for (const auto& p : kept) {
      a.push_back(p.alpha);
      b.push_back(p.beta);
      g.push_back(p.gamma);
    }
    c.shape = summarize_errors(b, beta);
    c.scale = summarize_errors(a, cfg.alpha);
    c.location = summarize_errors(g, cfg.gamma);
    for (double z : cfg.zeta_grid) {
      std::vector<double> q;
      q.reserve(kept.size());
      for (const auto& p : kept) q.push_back(quantile(z, p));
      c.quantiles.push_back({z, summarize_errors(q, quantile(z, truth))});
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(c));
  }
  return out;
}

inline SimReport run_simulation(const SimConfig& cfg) {
  cfg.validate();
  SimReport rep;
  rep.master_seed = cfg.master_seed;
  for (double beta : cfg.beta_grid)
    for (std::size_t n : cfg.n_grid) {
      const auto t0 = std::chrono::steady_clock::now();
      auto cells = run_cell(cfg, beta, n);
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (auto& c : cells) {
        c.seconds = elapsed;
        rep.cells.push_back(std::move(c));
      }
    }
  return rep;
}

}  // namespace gelpf
