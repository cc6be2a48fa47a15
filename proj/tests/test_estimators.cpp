#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace gelpf;
using testsupport::draw;
using testsupport::rel;

TEST(FitLpf, ElectricalData) {
  const SortedSample s(testsupport::electrical());
  const LpfFit f = fit_lpf(s);
  EXPECT_TRUE(f.converged);
  EXPECT_FALSE(f.rejected);
  EXPECT_LT(rel(f.alpha_hat, 91.1620), 0.01);
  EXPECT_LT(rel(f.beta_hat, 1.0821), 0.01);
  EXPECT_LT(rel(f.gamma_hat, -2.7991), 0.01);
  EXPECT_DOUBLE_EQ(f.gamma_init, 0.15);
  EXPECT_LT(f.grad_norm, 1e-6);
}

TEST(FitLpf, FirstOrderConditionAtMaximum) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto s = draw({1, 0.7 + 0.5 * seed, 0}, 60, seed);
    const LpfFit f = fit_lpf(s);
    ASSERT_TRUE(f.converged);
    const auto g = grad_log_lik_v(f.alpha_hat, f.beta_hat, s);
    EXPECT_LT(std::hypot(f.alpha_hat * g.d_alpha, f.beta_hat * g.d_beta), 1e-6);
    // no better point nearby
    for (double da : {-0.01, 0.01})
      for (double db : {-0.01, 0.01})
        EXPECT_LE(log_lik_v(f.alpha_hat * (1 + da), f.beta_hat * (1 + db), s).log_value, f.loglik_at_max);
  }
}

TEST(FitLpf, ConsistentAtLargeN) {
  const auto s = draw({1, 1, 0}, 10000, 2718);
  const LpfFit f = fit_lpf(s);
  EXPECT_NEAR(f.alpha_hat, 1.0, 0.05);
  EXPECT_NEAR(f.beta_hat, 1.0, 0.05);
  EXPECT_NEAR(f.gamma_hat, 0.0, 0.05);
}

TEST(FitLpf, ScaleEquivariance) {
  const auto s = draw({1.5, 2.0, 1.0}, 40, 17);
  std::vector<double> scaled(s.xs().begin(), s.xs().end());
  const double k = 7.25;
  for (double& x : scaled) x *= k;
  const LpfFit a = fit_lpf(s), b = fit_lpf(SortedSample(scaled));
  EXPECT_NEAR(b.beta_hat, a.beta_hat, 1e-5 * a.beta_hat);
  EXPECT_NEAR(b.alpha_hat, k * a.alpha_hat, 1e-5 * k * a.alpha_hat);
  EXPECT_NEAR(b.gamma_hat, k * a.gamma_hat, 1e-5 * k * (std::abs(a.gamma_hat) + a.alpha_hat));
}

TEST(FitLpf, ShiftInvarianceIsExact) {
  // Shifts that are exact in binary keep every spacing bit-identical.
  const auto s = draw({1, 1.3, 0}, 30, 23);
  std::vector<double> base(s.xs().begin(), s.xs().end()), shifted = base;
  for (double& x : base) x = std::ldexp(std::round(std::ldexp(x, 20)), -20);
  for (std::size_t i = 0; i < base.size(); ++i) shifted[i] = base[i] + 64.0;
  const SortedSample sa(base), sb(shifted);
  const LpfFit a = fit_lpf(sa), b = fit_lpf(sb);
  EXPECT_EQ(a.alpha_hat, b.alpha_hat);
  EXPECT_EQ(a.beta_hat, b.beta_hat);
  EXPECT_DOUBLE_EQ(b.gamma_init - a.gamma_init, 64.0);
  EXPECT_NEAR(b.gamma_hat - a.gamma_hat, 64.0, 1e-12);
}

TEST(FitLpf, LocationCorrectionIsNonPositive) {
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    const auto s = draw({1, 0.5 + 0.25 * (seed - 40), 0}, 25, seed);
    const LpfFit f = fit_lpf(s, {}, 30.0);
    EXPECT_LE(f.gamma_hat, f.gamma_init);
  }
}

TEST(FitLpf, RejectionIsAFlagNotAnError) {
  const SortedSample s(testsupport::electrical());
  const LpfFit f = fit_lpf(s, {}, 1.0);
  EXPECT_TRUE(f.rejected);
  EXPECT_TRUE(f.converged);
  EXPECT_THROW(fit_lpf(s, {}, 0.0), ParameterError);
}

TEST(FitLpf, GammaNonnegClamp) {
  LpfOptions o;
  o.gamma_nonneg = true;
  const SortedSample s(testsupport::electrical());
  const LpfFit f = fit_lpf(s, o);
  EXPECT_EQ(f.gamma_hat, 0.0);
  EXPECT_TRUE(f.gamma_clamped);
  EXPECT_THROW(fit_lpf(SortedSample({-1.0, 2.0, 3.0, 4.0}), o), DataError);
}

TEST(FitLpf, NonConvergenceRaisesWithTrace) {
  LpfOptions o;
  o.grad_tol = 0.0;
  try {
    fit_lpf(SortedSample(testsupport::electrical()), o);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_FALSE(e.trace().empty());
  }
}

TEST(QuantilePlugin, ElectricalTable) {
  const LpfFit f = fit_lpf(SortedSample(testsupport::electrical()));
  EXPECT_LT(rel(quantile_plugin(f, 0.90), 213.9440), 0.005);
  EXPECT_NEAR(quantile_plugin(f, 0.01), -1.4970, 0.05);
  EXPECT_EQ(quantile_plugin(f, 0.0), f.gamma_hat);
  EXPECT_THROW(quantile_plugin(f, 1.0), ParameterError);
  double prev = -numeric::kInf;
  for (double z = 0.0; z < 1.0; z += 0.01) {
    const double q = quantile_plugin(f, z);
    EXPECT_GT(q, prev);
    prev = q;
  }
}

TEST(FitMle, LargeSampleRecoversTruth) {
  const auto s = draw({1, 2, 0}, 10000, 99);
  const MleFit f = fit_mle(s);
  EXPECT_TRUE(f.converged);
  EXPECT_NEAR(f.alpha_hat, 1.0, 0.05);
  EXPECT_NEAR(f.beta_hat, 2.0, 0.05);
  EXPECT_NEAR(f.gamma_hat, 0.0, 0.05);
}

TEST(FitMle, ShapeClampedBelowOne) {
  const auto s = draw({1, 0.5, 0}, 200, 5);
  const MleFit f = fit_mle(s);
  EXPECT_EQ(f.beta_hat, 1.0);
  EXPECT_TRUE(f.beta_at_bound);
  EXPECT_LT(f.gamma_hat, s.min());
}

TEST(FitMle, DominatesTruth) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GEParams truth{1, 1.5 + seed, 0};
    const auto s = draw(truth, 50, seed);
    const MleFit f = fit_mle(s);
    EXPECT_GE(f.beta_hat, 1.0);
    EXPECT_LT(f.gamma_hat, s.min());
    EXPECT_GE(f.loglik_at_max, full_loglik(s, truth) - 1e-9);
    EXPECT_NEAR(f.loglik_at_max, full_loglik(s, f.params()), 1e-9 * std::abs(f.loglik_at_max));
  }
}

TEST(TailCheck, BetaOneBoundIsExact) {
  const auto t = min_stat_tail_check({1, 1, 0}, 50, 0.2, 200000, 5);
  EXPECT_NEAR(t.bound, std::exp(-10.0), 1e-18);
  EXPECT_NEAR(t.exact, t.bound, 1e-15);
  EXPECT_LE(t.empirical, t.bound + 3 * std::sqrt(t.bound / 200000));
}

TEST(TailCheck, TrivialLimits) {
  EXPECT_EQ(min_stat_tail_check({1, 1.5, 0}, 20, 50.0, 1000, 1).empirical, 0.0);
  const auto a = min_stat_tail_check({1, 1.5, 0}, 10, 0.1, 50000, 2);
  const auto b = min_stat_tail_check({1, 1.5, 0}, 20, 0.1, 50000, 2);
  EXPECT_LT(b.empirical, a.empirical);
  EXPECT_NEAR(a.empirical, a.exact, 4 * a.std_error);
}
