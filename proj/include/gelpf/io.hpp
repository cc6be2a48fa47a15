#pragma once

// Data-file reading and JSON conversion of the report types.

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gelpf/bootstrap.hpp"
#include "gelpf/error.hpp"
#include "gelpf/estimators.hpp"
#include "gelpf/gof.hpp"
#include "gelpf/simulation.hpp"
#include "gelpf/stats.hpp"

namespace gelpf {

struct DataFile {
  std::vector<double> values;
  int decimals = 0;  ///< most digits after the decimal point in any token

  /// Recording resolution, used as the jitter width for ties.
  double resolution() const { return std::pow(10.0, -decimals); }
};

/// One value per line, or comma/whitespace separated; '#' starts a comment.
inline DataFile parse_data(std::istream& in) {
  DataFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v))
        throw DataError("line " + std::to_string(lineno) + ": not a finite number: '" + tok + "'");
      if (auto dot = tok.find('.'); dot != std::string::npos) {
        std::size_t end = tok.find_first_of("eE", dot);
        if (end == std::string::npos) end = tok.size();
        out.decimals = std::max(out.decimals, static_cast<int>(end - dot - 1));
      }
      out.values.push_back(v);
    }
  }
  if (out.values.empty()) throw DataError("no observations found");
  return out;
}

inline DataFile read_data(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open '" + path + "'");
  return parse_data(f);
}

namespace detail {

// JSON has no infinity; +inf round-trips through null.
inline nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }
inline double from_finite_or_null(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const GEParams& p) {
  j = {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}};
}
inline void from_json(const nlohmann::json& j, GEParams& p) {
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.gamma = j.at("gamma").get<double>();
}

inline void to_json(nlohmann::json& j, const LpfFit& f) {
  j = {{"method", "LPF"},
       {"alpha_hat", f.alpha_hat},
       {"beta_hat", f.beta_hat},
       {"gamma_init", f.gamma_init},
       {"gamma_hat", f.gamma_hat},
       {"loglik_at_max", f.loglik_at_max},
       {"grad_norm", f.grad_norm},
       {"optimizer_iters", f.optimizer_iters},
       {"likelihood_evals", f.likelihood_evals},
       {"converged", f.converged},
       {"rejected", f.rejected},
       {"gamma_clamped", f.gamma_clamped},
       {"multimodal_suspected", f.multimodal_suspected},
       {"beta_cutoff", detail::finite_or_null(f.beta_cutoff)},
       {"n", f.n},
       {"trace", f.trace}};
}
inline void from_json(const nlohmann::json& j, LpfFit& f) {
  j.at("alpha_hat").get_to(f.alpha_hat);
  j.at("beta_hat").get_to(f.beta_hat);
  j.at("gamma_init").get_to(f.gamma_init);
  j.at("gamma_hat").get_to(f.gamma_hat);
  j.at("loglik_at_max").get_to(f.loglik_at_max);
  j.at("grad_norm").get_to(f.grad_norm);
  j.at("optimizer_iters").get_to(f.optimizer_iters);
  j.at("likelihood_evals").get_to(f.likelihood_evals);
  j.at("converged").get_to(f.converged);
  j.at("rejected").get_to(f.rejected);
  j.at("gamma_clamped").get_to(f.gamma_clamped);
  j.at("multimodal_suspected").get_to(f.multimodal_suspected);
  f.beta_cutoff = detail::from_finite_or_null(j.at("beta_cutoff"));
  j.at("n").get_to(f.n);
  j.at("trace").get_to(f.trace);
}

inline void to_json(nlohmann::json& j, const MleFit& f) {
  j = {{"method", "MLE"},
       {"alpha_hat", f.alpha_hat},
       {"beta_hat", f.beta_hat},
       {"gamma_hat", f.gamma_hat},
       {"loglik_at_max", f.loglik_at_max},
       {"evals", f.evals},
       {"converged", f.converged},
       {"beta_at_bound", f.beta_at_bound},
       {"gamma_at_bound", f.gamma_at_bound}};
}
inline void from_json(const nlohmann::json& j, MleFit& f) {
  j.at("alpha_hat").get_to(f.alpha_hat);
  j.at("beta_hat").get_to(f.beta_hat);
  j.at("gamma_hat").get_to(f.gamma_hat);
  j.at("loglik_at_max").get_to(f.loglik_at_max);
  j.at("evals").get_to(f.evals);
  j.at("converged").get_to(f.converged);
  j.at("beta_at_bound").get_to(f.beta_at_bound);
  j.at("gamma_at_bound").get_to(f.gamma_at_bound);
}

inline void to_json(nlohmann::json& j, const GofReport& g) {
  j = {{"ks_stat", g.ks_stat}, {"ks_pvalue", g.ks_pvalue}, {"cvm_stat", g.cvm_stat}, {"cvm_pvalue", g.cvm_pvalue}};
}
inline void from_json(const nlohmann::json& j, GofReport& g) {
  j.at("ks_stat").get_to(g.ks_stat);
  j.at("ks_pvalue").get_to(g.ks_pvalue);
  j.at("cvm_stat").get_to(g.cvm_stat);
  j.at("cvm_pvalue").get_to(g.cvm_pvalue);
}

inline void to_json(nlohmann::json& j, const Interval& i) { j = nlohmann::json::array({i.lo, i.hi}); }
inline void from_json(const nlohmann::json& j, Interval& i) {
  i.lo = j.at(0).get<double>();
  i.hi = j.at(1).get<double>();
}

inline void to_json(nlohmann::json& j, const LevelIntervals& l) {
  j = {{"level", l.level}, {"shape", l.shape}, {"scale", l.scale}, {"location", l.location}};
}
inline void from_json(const nlohmann::json& j, LevelIntervals& l) {
  j.at("level").get_to(l.level);
  j.at("shape").get_to(l.shape);
  j.at("scale").get_to(l.scale);
  j.at("location").get_to(l.location);
}

inline void to_json(nlohmann::json& j, const BootstrapReport& r) {
  j = {{"method", r.method},
       {"intervals", r.intervals},
       {"requested", r.requested},
       {"replicates_used", r.replicates_used},
       {"rejected", r.rejected},
       {"failed", r.failed},
       {"rejection_proportion", r.rejection_proportion},
       {"beta_cutoff", detail::finite_or_null(r.beta_cutoff)},
       {"seed", r.seed},
       {"warnings", r.warnings}};
}
inline void from_json(const nlohmann::json& j, BootstrapReport& r) {
  j.at("method").get_to(r.method);
  j.at("intervals").get_to(r.intervals);
  j.at("requested").get_to(r.requested);
  j.at("replicates_used").get_to(r.replicates_used);
  j.at("rejected").get_to(r.rejected);
  j.at("failed").get_to(r.failed);
  j.at("rejection_proportion").get_to(r.rejection_proportion);
  r.beta_cutoff = detail::from_finite_or_null(j.at("beta_cutoff"));
  j.at("seed").get_to(r.seed);
  j.at("warnings").get_to(r.warnings);
}

inline void to_json(nlohmann::json& j, const SummaryStats& s) {
  j = {{"n", s.n},
       {"min", s.min},
       {"q1", s.q1},
       {"median", s.median},
       {"mean", s.mean},
       {"q3", s.q3},
       {"max", s.max},
       {"skewness", s.skewness},
       {"kurtosis", s.kurtosis},
       {"skewness_population", s.skewness_population},
       {"kurtosis_population", s.kurtosis_population},
       {"skewness_adjusted", s.skewness_adjusted},
       {"kurtosis_adjusted", s.kurtosis_adjusted}};
}

inline void to_json(nlohmann::json& j, const Metric& m) {
  j = {{"true", m.true_value}, {"bias", m.bias}, {"rmse", m.rmse}, {"bias_se", m.bias_se}, {"rmse_se", m.rmse_se}};
}
inline void from_json(const nlohmann::json& j, Metric& m) {
  j.at("true").get_to(m.true_value);
  j.at("bias").get_to(m.bias);
  j.at("rmse").get_to(m.rmse);
  j.at("bias_se").get_to(m.bias_se);
  j.at("rmse_se").get_to(m.rmse_se);
}

inline void to_json(nlohmann::json& j, const CellResult& c) {
  nlohmann::json q = nlohmann::json::array();
  for (const auto& qm : c.quantiles) {
    nlohmann::json e = qm.metric;
    e["zeta"] = qm.zeta;
    q.push_back(std::move(e));
  }
  j = {{"method", to_string(c.method)},
       {"beta", c.beta},
       {"beta_U", c.beta_cutoff},
       {"n", c.n},
       {"reps", c.reps},
       {"retained", c.retained},
       {"rejected", c.rejected},
       {"failed", c.failed},
       {"p", c.p},
       {"valid", c.valid},
       {"diagnostic", c.diagnostic},
       {"shape", c.shape},
       {"scale", c.scale},
       {"location", c.location},
       {"quantiles", std::move(q)},
       {"seconds", c.seconds}};
}
inline void from_json(const nlohmann::json& j, CellResult& c) {
  c.method = method_from_string(j.at("method").get<std::string>());
  j.at("beta").get_to(c.beta);
  j.at("beta_U").get_to(c.beta_cutoff);
  j.at("n").get_to(c.n);
  j.at("reps").get_to(c.reps);
  j.at("retained").get_to(c.retained);
  j.at("rejected").get_to(c.rejected);
  j.at("failed").get_to(c.failed);
  j.at("p").get_to(c.p);
  j.at("valid").get_to(c.valid);
  j.at("diagnostic").get_to(c.diagnostic);
  j.at("shape").get_to(c.shape);
  j.at("scale").get_to(c.scale);
  j.at("location").get_to(c.location);
  c.quantiles.clear();
  for (const auto& e : j.at("quantiles")) c.quantiles.push_back({e.at("zeta").get<double>(), e.get<Metric>()});
  j.at("seconds").get_to(c.seconds);
}

inline void to_json(nlohmann::json& j, const SimReport& r) {
  j = {{"note", r.note}, {"master_seed", r.master_seed}, {"cells", r.cells}};
}
inline void from_json(const nlohmann::json& j, SimReport& r) {
  j.at("note").get_to(r.note);
  j.at("master_seed").get_to(r.master_seed);
  j.at("cells").get_to(r.cells);
}

/// Simulation config from JSON; absent keys keep their defaults.
inline SimConfig sim_config_from_json(const nlohmann::json& j) {
  SimConfig c;
  if (j.contains("alpha")) j.at("alpha").get_to(c.alpha);
  if (j.contains("gamma")) j.at("gamma").get_to(c.gamma);
  if (j.contains("beta_grid")) j.at("beta_grid").get_to(c.beta_grid);
  if (j.contains("n_grid")) j.at("n_grid").get_to(c.n_grid);
  if (j.contains("reps")) j.at("reps").get_to(c.reps);
  if (j.contains("zeta_grid")) j.at("zeta_grid").get_to(c.zeta_grid);
  if (j.contains("seed")) j.at("seed").get_to(c.master_seed);
  if (j.contains("threads")) j.at("threads").get_to(c.threads);
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(method_from_string(m.get<std::string>()));
  }
  if (j.contains("beta_U")) {
    // {"0.5": 2, "1": 8, ...} or [[0.5, 2], [1, 8], ...]
    const auto& b = j.at("beta_U");
    if (b.is_object()) {
      for (auto it = b.begin(); it != b.end(); ++it) c.beta_cutoff[std::stod(it.key())] = it.value().get<double>();
    } else {
      for (const auto& kv : b) c.beta_cutoff[kv.at(0).get<double>()] = kv.at(1).get<double>();
    }
  }
  return c;
}

inline void write_csv(std::ostream& os, const SimReport& r) {
  os << "# " << r.note << "\n";
  os << "method,beta,beta_U,n,reps,retained,rejected,failed,p,valid,"
        "shape_bias,shape_rmse,shape_bias_se,shape_rmse_se,"
        "scale_bias,scale_rmse,scale_bias_se,scale_rmse_se,"
        "location_bias,location_rmse,location_bias_se,location_rmse_se";
  const std::vector<QuantileMetric>* zs = r.cells.empty() ? nullptr : &r.cells.front().quantiles;
  if (zs)
    for (const auto& q : *zs) os << ",q" << q.zeta << "_bias,q" << q.zeta << "_rmse";
  os << ",seconds\n";
  os.precision(10);
  auto metric = [&](const Metric& m) { os << ',' << m.bias << ',' << m.rmse << ',' << m.bias_se << ',' << m.rmse_se; };
  for (const auto& c : r.cells) {
    os << to_string(c.method) << ',' << c.beta << ',' << c.beta_cutoff << ',' << c.n << ',' << c.reps << ','
       << c.retained << ',' << c.rejected << ',' << c.failed << ',' << c.p << ',' << (c.valid ? 1 : 0);
    metric(c.shape);
    metric(c.scale);
    metric(c.location);
    for (const auto& q : c.quantiles) os << ',' << q.metric.bias << ',' << q.metric.rmse;
    os << ',' << c.seconds << '\n';
  }
}

}  // namespace gelpf
