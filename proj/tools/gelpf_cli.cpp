// gelpf: command-line front end.
//
// Exit codes: 0 success, 2 input error, 3 non-convergence, 4 degenerate bootstrap.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gelpf/gelpf.hpp"

using namespace gelpf;
using nlohmann::json;

namespace {

enum Exit { ok = 0, input_error = 2, numerical_error = 3, degenerate = 4 };

struct Common {
  std::string path;
  std::string method = "lpf";
  bool gamma_nonneg = false;
  double beta_cutoff = std::numeric_limits<double>::infinity();
  double tol = 1e-6;
  std::string ties = "reject";
  double jitter = 0.0;  // 0: take the recording resolution from the file
  std::uint64_t seed = 20240101;
  bool as_json = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_method = true) {
  cmd->add_option("data", c.path, "data file: one value per line or one comma-separated row")->required();
  if (with_method)
    cmd->add_option("--method", c.method, "estimator")->check(CLI::IsMember({"lpf", "mle"}));
  cmd->add_flag("--gamma-nonneg", c.gamma_nonneg, "constrain the location estimate to be >= 0");
  cmd->add_option("--tol", c.tol, "gradient-norm tolerance of the LPF optimizer");
  cmd->add_option("--ties", c.ties, "tied observations: reject or jitter")->check(CLI::IsMember({"reject", "jitter"}));
  cmd->add_option("--jitter-resolution", c.jitter, "jitter width for ties (default: recording resolution)");
  cmd->add_option("--seed", c.seed, "seed for jitter and resampling");
  cmd->add_flag("--json", c.as_json, "machine-readable output");
}

SortedSample load(const Common& c) {
  const DataFile d = read_data(c.path);
  TieHandling t;
  t.policy = c.ties == "jitter" ? TiePolicy::jitter : TiePolicy::reject;
  t.resolution = c.jitter > 0.0 ? c.jitter : d.resolution();
  t.seed = c.seed;
  return SortedSample(d.values, t);
}

LpfOptions lpf_options(const Common& c) {
  LpfOptions o;
  o.grad_tol = c.tol;
  o.gamma_nonneg = c.gamma_nonneg;
  return o;
}

struct Fitted {
  GEParams params;
  json j;
};

Fitted fit_any(const SortedSample& s, const Common& c) {
  if (c.method == "mle") {
    const MleFit f = fit_mle(s);
    if (!f.converged) throw ConvergenceError("MLE optimizer did not converge", {});
    GEParams p = f.params();
    json j = f;
    if (c.gamma_nonneg) {
      if (s.min() < 0.0) throw DataError("gamma >= 0 requested but the sample has negative observations");
      if (p.gamma < 0.0) {
        p.gamma = 0.0;
        j["gamma_hat"] = 0.0;
        j["gamma_clamped"] = true;
      }
    }
    return {p, j};
  }
  const LpfFit f = fit_lpf(s, lpf_options(c), c.beta_cutoff);
  return {f.params(), json(f)};
}

void print_params(const std::string& label, const GEParams& p) {
  std::printf("%-8s alpha = %.6f  beta = %.6f  gamma = %.6f\n", label.c_str(), p.alpha, p.beta, p.gamma);
}

int cmd_fit(const Common& c) {
  const SortedSample s = load(c);
  const Fitted f = fit_any(s, c);
  if (c.as_json) {
    std::cout << f.j.dump(2) << "\n";
    return ok;
  }
  print_params(c.method == "mle" ? "MLE" : "LPF", f.params);
  std::printf("n = %zu  log-likelihood = %.6f\n", s.size(), f.j.at("loglik_at_max").get<double>());
  if (c.method == "lpf") {
    std::printf("gamma_init = x_(1) = %.6f  |grad| = %.3g  evaluations = %zu\n", f.j["gamma_init"].get<double>(),
                f.j["grad_norm"].get<double>(), f.j["likelihood_evals"].get<std::size_t>());
    if (f.j["rejected"].get<bool>()) std::printf("note: beta_hat >= beta cutoff, fit flagged as rejected\n");
    if (f.j["multimodal_suspected"].get<bool>()) std::printf("note: restarts reached different optima\n");
  } else {
    if (f.j["beta_at_bound"].get<bool>()) std::printf("note: beta_hat at its lower bound 1\n");
    if (f.j["gamma_at_bound"].get<bool>()) std::printf("note: gamma_hat at its upper bound x_(1) - standoff\n");
  }
  if (f.j.value("gamma_clamped", false)) std::printf("note: gamma_hat clamped at 0\n");
  return ok;
}

int cmd_quantiles(const Common& c, std::vector<double> zetas) {
  const SortedSample s = load(c);
  const Fitted f = fit_any(s, c);
  if (zetas.empty()) zetas = default_zeta_grid();
  json out = json::array();
  for (double z : zetas) {
    Probability{z};
    const double q = quantile(z, f.params);
    out.push_back({{"zeta", z}, {"quantile", q}});
    if (!c.as_json) std::printf("%8.4f  %12.4f\n", z, q);
  }
  if (c.as_json) std::cout << json{{"params", f.params}, {"quantiles", out}}.dump(2) << "\n";
  return ok;
}

int cmd_gof(const Common& c, const std::vector<double>& params, const std::string& emit_cdf) {
  const SortedSample s = load(c);
  GEParams p;
  if (!params.empty()) {
    if (params.size() != 3) throw ParameterError("--params takes alpha,beta,gamma");
    p = {params[0], params[1], params[2]};
    p.validate();
  } else {
    p = fit_any(s, c).params;
  }
  const GofReport g = assess_fit(s, p);
  if (!emit_cdf.empty()) {
    std::ofstream f(emit_cdf);
    if (!f) throw DataError("cannot write '" + emit_cdf + "'");
    f.precision(12);
    const Ecdf e = ecdf(s);
    f << "x,ecdf,fitted_cdf\n";
    for (double x : s.xs()) f << x << ',' << e(x) << ',' << cdf(x, p) << '\n';
  }
  if (c.as_json) {
    json j = g;
    j["params"] = p;
    j["pvalues"] = "asymptotic, parameters treated as known";
    std::cout << j.dump(2) << "\n";
    return ok;
  }
  print_params("model", p);
  std::printf("KS   D  = %.4f  p = %.4f\n", g.ks_stat, g.ks_pvalue);
  std::printf("CvM  W2 = %.4f  p = %.4f\n", g.cvm_stat, g.cvm_pvalue);
  std::printf("(asymptotic p-values, parameters treated as known)\n");
  return ok;
}

int cmd_bootstrap(const Common& c, const std::vector<double>& levels, std::size_t reps, unsigned threads) {
  const SortedSample s = load(c);
  BootstrapOptions o;
  o.levels = levels;
  o.reps = reps;
  o.beta_cutoff = c.beta_cutoff;
  o.seed = c.seed;
  o.threads = threads;
  o.lpf = lpf_options(c);
  const LpfFit fit = fit_lpf(s, o.lpf, o.beta_cutoff);
  const BootstrapReport r = bootstrap_ci(s, fit, o);
  if (c.as_json) {
    std::cout << json{{"fit", fit}, {"bootstrap", r}}.dump(2) << "\n";
    return ok;
  }
  print_params("LPF", fit.params());
  std::printf("%zu replicates requested, %zu used, %zu rejected (%zu failed), p = %.4f\n", r.requested,
              r.replicates_used, r.rejected, r.failed, r.rejection_proportion);
  for (const auto& l : r.intervals)
    std::printf("%4.0f%%  shape (%.4f, %.4f)  scale (%.4f, %.4f)  location (%.4f, %.4f)\n", 100 * l.level,
                l.shape.lo, l.shape.hi, l.scale.lo, l.scale.hi, l.location.lo, l.location.hi);
  for (const auto& w : r.warnings) std::printf("warning: %s\n", w.c_str());
  return ok;
}

struct SimArgs {
  std::string config;
  std::string csv, json_out;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool full_grid = false;
};

int cmd_simulate(const SimArgs& a) {
  json j = json::object();
  if (!a.config.empty()) {
    std::ifstream f(a.config);
    if (!f) throw DataError("cannot open '" + a.config + "'");
    try {
      j = json::parse(f);
    } catch (const json::exception& e) {
      throw DataError(std::string("config: ") + e.what());
    }
  }
  SimConfig cfg;
  try {
    cfg = sim_config_from_json(j);
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  if (a.full_grid) {
    const SimConfig d;
    cfg.beta_grid = d.beta_grid;
    cfg.n_grid = d.n_grid;
    cfg.reps = 10000;
  }
  if (a.reps) cfg.reps = *a.reps;
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.threads) cfg.threads = a.threads;
  const SimReport r = run_simulation(cfg);
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw DataError("cannot write '" + a.csv + "'");
    write_csv(f, r);
  }
  if (!a.json_out.empty()) {
    std::ofstream f(a.json_out);
    if (!f) throw DataError("cannot write '" + a.json_out + "'");
    f << json(r).dump(2) << "\n";
  }
  if (a.csv.empty() && a.json_out.empty()) write_csv(std::cout, r);
  for (const auto& c : r.cells)
    if (!c.valid) std::fprintf(stderr, "cell %s beta=%g n=%zu invalid: %s\n", to_string(c.method).c_str(), c.beta, c.n,
                                c.diagnostic.c_str());
  return ok;
}

int cmd_summarize(const Common& c) {
  const DataFile d = read_data(c.path);
  const SummaryStats s = summarize(d.values);
  if (c.as_json) {
    std::cout << json(s).dump(2) << "\n";
    return ok;
  }
  std::printf("n %zu\nmin %.4f\nq1 %.4f\nmedian %.4f\nmean %.4f\nq3 %.4f\nmax %.4f\nskewness %.4f\nkurtosis %.4f\n",
              s.n, s.min, s.q1, s.median, s.mean, s.q3, s.max, s.skewness, s.kurtosis);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Location-parameter-free estimation for the three-parameter generalized exponential distribution"};
  app.require_subcommand(1);

  Common fit_c, q_c, gof_c, boot_c, sum_c;
  auto* fit = app.add_subcommand("fit", "fit (alpha, beta, gamma)");
  add_common(fit, fit_c);
  fit->add_option("--beta-cutoff", fit_c.beta_cutoff, "flag fits with beta_hat >= this value as rejected");

  std::vector<double> zetas;
  auto* qs = app.add_subcommand("quantiles", "plug-in quantile estimates");
  add_common(qs, q_c);
  qs->add_option("--zeta", zetas, "probabilities in [0, 1)")->delimiter(',');

  std::vector<double> params;
  std::string emit_cdf;
  auto* gof = app.add_subcommand("gof", "Kolmogorov-Smirnov and Cramer-von Mises tests");
  add_common(gof, gof_c);
  gof->add_option("--params", params, "test against alpha,beta,gamma instead of a fit")->delimiter(',');
  gof->add_option("--emit-cdf", emit_cdf, "write x, empirical and fitted CDF as CSV");

  std::vector<double> levels{0.95, 0.99};
  std::size_t reps = 10000;
  unsigned threads = 0;
  boot_c.beta_cutoff = 12.0;
  auto* boot = app.add_subcommand("bootstrap", "parametric percentile bootstrap intervals");
  add_common(boot, boot_c, false);
  boot->add_option("--levels", levels, "confidence levels")->delimiter(',');
  boot->add_option("--reps", reps, "bootstrap replicates");
  boot->add_option("--beta-cutoff", boot_c.beta_cutoff, "discard replicates with beta_hat >= this value");
  boot->add_option("--threads", threads, "worker threads (0: all cores)");

  SimArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo bias/RMSE study");
  simulate->add_option("config", sim.config, "JSON file with SimConfig fields");
  simulate->add_option("--csv", sim.csv, "write the report as CSV");
  simulate->add_option("--json", sim.json_out, "write the report as JSON");
  simulate->add_option("--reps", sim.reps, "override replicates per cell");
  simulate->add_option("--seed", sim.seed, "override the master seed");
  simulate->add_option("--threads", sim.threads, "worker threads (0: all cores)");
  simulate->add_flag("--full-grid", sim.full_grid, "all six shapes and four sample sizes at 10000 replicates");

  auto* sum = app.add_subcommand("summarize", "descriptive statistics");
  add_common(sum, sum_c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : input_error;
  }

  try {
    if (*fit) return cmd_fit(fit_c);
    if (*qs) return cmd_quantiles(q_c, zetas);
    if (*gof) return cmd_gof(gof_c, params, emit_cdf);
    if (*boot) return cmd_bootstrap(boot_c, levels, reps, threads);
    if (*simulate) return cmd_simulate(sim);
    if (*sum) return cmd_summarize(sum_c);
  } catch (const DegenerateBootstrapError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return degenerate;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    for (const auto& t : e.trace()) std::fprintf(stderr, "  %s\n", t.c_str());
    return numerical_error;
  } catch (const IntegrationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return numerical_error;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return input_error;
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return input_error;
  }
  return ok;
}
