#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace gelpf;

TEST(Params, Validation) {
  EXPECT_NO_THROW((GEParams{1, 1, 0}.validate()));
  EXPECT_THROW((GEParams{0, 1, 0}.validate()), ParameterError);
  EXPECT_THROW((GEParams{1, -1, 0}.validate()), ParameterError);
  EXPECT_THROW((GEParams{1, 1, NAN}.validate()), ParameterError);
  EXPECT_THROW(Probability{1.5}, ParameterError);
  EXPECT_THROW(Probability{-0.1}, ParameterError);
}

TEST(Cdf, Examples) {
  EXPECT_EQ(cdf(-1.0, {1, 2, 0}), 0.0);
  EXPECT_NEAR(cdf(std::numbers::ln2, {1, 1, 0}), 0.5, 1e-15);
  EXPECT_NEAR(cdf(1.0, {1, 2, 0}), 0.399576, 1e-6);
  EXPECT_NEAR(cdf(1.0, {1, 2, 0}), std::pow(1 - std::exp(-1.0), 2), 1e-15);
  EXPECT_THROW(cdf(1.0, {-1, 2, 0}), ParameterError);
}

TEST(Cdf, MonotoneAndLimits) {
  const GEParams p{2.0, 0.7, -1.0};
  double prev = 0.0;
  for (double x = -1.5; x < 60; x += 0.05) {
    const double F = cdf(x, p);
    EXPECT_GE(F, prev);
    prev = F;
  }
  EXPECT_NEAR(cdf(200.0, p), 1.0, 1e-15);
}

TEST(Pdf, Examples) {
  EXPECT_NEAR(pdf(0.5, {1, 1, 0}), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(pdf(0.5, {1, 1, 0}), 0.606531, 1e-6);
  EXPECT_EQ(pdf(-0.2, {1, 2, 0}), 0.0);
  EXPECT_EQ(pdf(0.0, {1, 2, 0}), 0.0);
  EXPECT_EQ(pdf(0.0, {1, 0.5, 0}), std::numeric_limits<double>::infinity());
}

TEST(Pdf, IntegratesToOne) {
  for (double beta : {2.0, 0.5, 1.0, 7.0}) {
    const GEParams p{1, beta, 0};
    auto f = [&](double tau) {
      quad::LogIntegrand<0> r;
      r.log_f = log_pdf(std::exp(tau), p);
      return r;
    };
    const auto res = quad::integrate_half_line<0>(f, 0.0, {1e-13, 1e-8, 10, 0.5, 55});
    EXPECT_NEAR(std::exp(res.log_value), 1.0, 1e-10) << beta;
  }
}

TEST(Pdf, MatchesCdfDerivative) {
  const GEParams p{1.7, 2.3, 0.4};
  for (double x : {0.5, 1.0, 3.0, 8.0}) {
    const double h = 1e-6;
    EXPECT_NEAR(pdf(x, p), (cdf(x + h, p) - cdf(x - h, p)) / (2 * h), 1e-7);
    EXPECT_NEAR(log_pdf(x, p), std::log(pdf(x, p)), 1e-12);
  }
}

TEST(Quantile, Examples) {
  EXPECT_NEAR(quantile(0.5, {1, 1, 0}), std::numbers::ln2, 1e-15);
  EXPECT_EQ(quantile(0.0, {3, 2, -4.5}), -4.5);
  EXPECT_NEAR(quantile(0.5, {91.1620, 1.0821, -2.7991}), 65.4500, 5e-4);
  EXPECT_THROW(quantile(1.0, {1, 1, 0}), ParameterError);
  EXPECT_THROW(quantile(-0.1, {1, 1, 0}), ParameterError);
}

TEST(Quantile, RoundTripAndEquivariance) {
  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const GEParams p{0.1 + 5 * rng.uniform_open(), 0.2 + 6 * rng.uniform_open(), 10 * (rng.uniform_open() - 0.5)};
    double prev = -numeric::kInf;
    for (double z = 0.001; z < 0.999; z += 0.0125) {
      const double q = quantile(z, p);
      EXPECT_NEAR(cdf(q, p), z, 1e-12);
      EXPECT_GT(q, prev);
      prev = q;
      const double std_q = quantile(z, {1, p.beta, 0});
      EXPECT_NEAR(q, p.gamma + p.alpha * std_q, 1e-12 * (1 + std::abs(q)));
    }
  }
}

TEST(Sample, InverseTransformAtHalf) {
  // quantile(0.5) is what sample() returns for u = 0.5
  EXPECT_NEAR(quantile(0.5, {1, 1, 0}), std::log(2.0), 1e-15);
}

TEST(Sample, DeterministicUnderSeed) {
  Rng a(99), b(99);
  EXPECT_EQ(sample({1, 1.5, 0}, 100, a), sample({1, 1.5, 0}, 100, b));
}

TEST(Sample, ExponentialMean) {
  Rng rng(2024);
  const auto xs = sample({1, 1, 0}, 1000000, rng);
  double m = 0;
  for (double x : xs) m += x;
  EXPECT_NEAR(m / xs.size(), 1.0, 0.01);
}

TEST(Sample, KsDistanceSmall) {
  for (double beta : {0.5, 1.0, 2.5}) {
    const GEParams p{1.3, beta, 0.2};
    Rng rng(77);
    auto xs = sample(p, 100000, rng);
    std::sort(xs.begin(), xs.end());
    double d = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double F = cdf(xs[i], p);
      d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    EXPECT_LT(d, 0.01) << beta;
  }
}
