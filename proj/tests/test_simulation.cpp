#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"

using namespace gelpf;

TEST(McStandardError, Examples) {
  std::vector<double> c(100, 3.5);
  EXPECT_EQ(mc_standard_error(c, c.size()), 0.0);
  std::vector<double> b;
  for (int i = 0; i < 400; ++i) b.push_back(i % 2);
  EXPECT_NEAR(mc_standard_error(b, b.size()), 0.5 / std::sqrt(400.0), 1e-15);
  Rng rng(1);
  std::vector<double> z;
  for (int i = 0; i < 10000; ++i) {
    // Box-Muller
    const double u = rng.uniform_open(), v = rng.uniform_open();
    z.push_back(std::sqrt(-2 * std::log(u)) * std::cos(2 * std::numbers::pi * v));
  }
  EXPECT_NEAR(mc_standard_error(z, z.size()), 0.01, 0.002);
  EXPECT_THROW(mc_standard_error(z, 1), ParameterError);
}

namespace {

SimConfig tiny() {
  SimConfig c;
  c.beta_grid = {1.0, 2.0};
  c.n_grid = {20, 30};
  c.reps = 40;
  c.zeta_grid = {0.1, 0.5};
  c.master_seed = 9;
  return c;
}

}  // namespace

TEST(Simulation, DeterministicAndScheduleIndependent) {
  SimConfig a = tiny(), b = tiny();
  b.threads = 3;
  b.beta_grid = {2.0, 1.0};  // grid order must not matter either
  const SimReport ra = run_simulation(a), rb = run_simulation(b);
  for (const auto& c : ra.cells) {
    const CellResult* d = rb.find(c.method, c.beta, c.n);
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(c.shape.bias, d->shape.bias);
    EXPECT_EQ(c.scale.rmse, d->scale.rmse);
    EXPECT_EQ(c.location.bias, d->location.bias);
    EXPECT_EQ(c.quantiles[1].metric.rmse, d->quantiles[1].metric.rmse);
    EXPECT_EQ(c.rejected, d->rejected);
  }
}

TEST(Simulation, CellInvariants) {
  SimConfig c = tiny();
  c.methods = {Method::lpf, Method::mle};
  const SimReport r = run_simulation(c);
  EXPECT_EQ(r.cells.size(), 8u);
  for (const auto& cell : r.cells) {
    EXPECT_EQ(cell.retained + cell.rejected + cell.failed, cell.reps);
    EXPECT_GE(cell.p, 0.0);
    EXPECT_LE(cell.p, 1.0);
    for (const Metric* m : {&cell.shape, &cell.scale, &cell.location}) EXPECT_GE(m->rmse, std::abs(m->bias) - 1e-15);
    for (const auto& q : cell.quantiles) EXPECT_GE(q.metric.rmse, std::abs(q.metric.bias) - 1e-15);
  }
}

TEST(Simulation, AllRejectedCellIsInvalid) {
  SimConfig c = tiny();
  c.beta_grid = {2.0};
  c.n_grid = {20};
  c.beta_cutoff = {{2.0, 1e-3}};
  const SimReport r = run_simulation(c);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_FALSE(r.cells[0].valid);
  EXPECT_EQ(r.cells[0].p, 1.0);
  EXPECT_FALSE(r.cells[0].diagnostic.empty());
}

TEST(Simulation, ConfigValidation) {
  SimConfig c = tiny();
  c.beta_grid = {0.6};  // no cutoff configured
  EXPECT_THROW(run_simulation(c), ParameterError);
  c = tiny();
  c.n_grid = {2};
  EXPECT_THROW(run_simulation(c), ParameterError);
  c = tiny();
  c.reps = 0;
  EXPECT_THROW(run_simulation(c), ParameterError);
  c = tiny();
  c.zeta_grid = {1.0};
  EXPECT_THROW(run_simulation(c), ParameterError);
}

TEST(Simulation, DefaultsCoverTabledGrid) {
  const SimConfig c;
  EXPECT_EQ(c.alpha, 1.0);
  EXPECT_EQ(c.gamma, 0.0);
  EXPECT_EQ(c.beta_cutoff.at(0.5), 2.0);
  EXPECT_EQ(c.beta_cutoff.at(3.0), 30.0);
  EXPECT_EQ(c.zeta_grid.size(), 9u);
  EXPECT_NO_THROW(c.validate());
}

namespace {

const CellResult& half_shape_cell() {
  static const CellResult cell = [] {
    SimConfig c;
    c.beta_grid = {0.5};
    c.n_grid = {50};
    c.reps = 2000;
    c.master_seed = 2;
    return run_simulation(c).cells.at(0);
  }();
  return cell;
}

bool tail_bias_exceeds_median(double zeta) {
  const CellResult& cell = half_shape_cell();
  const auto* mid = cell.quantile(0.5);
  const auto* q = cell.quantile(zeta);
  const double se = std::hypot(q->metric.bias_se, mid->metric.bias_se);
  return std::abs(q->metric.bias) + se > std::abs(mid->metric.bias);
}

}  // namespace

TEST(Simulation, QuantileBiasGrowsTowardsUpperTail) { EXPECT_TRUE(tail_bias_exceeds_median(0.95)); }

// Known deviation: at beta = 0.5 the 5% quantile is about 0.0025, so its bias
// is bounded by the location error and stays below the median bias. Run
// through ctest as an expected failure.
TEST(KnownDeviation, DISABLED_QuantileBiasGrowsTowardsLowerTail) { EXPECT_TRUE(tail_bias_exceeds_median(0.05)); }
