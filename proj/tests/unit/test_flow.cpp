#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pmcf/errors.hpp"
#include "pmcf/flow.hpp"

using namespace pmcf;

namespace {

GraphState crossing_state(int n, int N, double value, double amplitude = 0.0) {
  const Grid grid = Grid::uniform(n, N, kTwoPi);
  std::vector<double> u(grid.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = value + amplitude * std::sin(grid.coordinates(i)[0]);
  return GraphState(0.0, u, grid, SpacetimeChart::robertson_walker(n, ScaleFactor::crossing(n)));
}

double spread(const std::vector<double>& u) {
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  return *hi - *lo;
}

// Solution of u' = -(sqrt(u) - tau) with u(0) = u0, from 2 (w + tau log(w - tau)) = -t + C, w = sqrt(u).
double half_power_oracle(double t, double u0, double tau) {
  auto F = [tau](double w) { return 2.0 * (w + tau * std::log(w - tau)); };
  const double target = F(std::sqrt(u0)) - t;
  double lo = tau + 1e-300, hi = std::sqrt(u0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) > target ? hi : lo) = mid;
  }
  const double w = 0.5 * (lo + hi);
  return w * w;
}

}  // namespace

TEST(FlowConfig, ValidationNamesTheField) {
  FlowConfig c;
  c.p = 1.5;
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "p");
  }
  c = FlowConfig{};
  c.tau = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = FlowConfig{};
  c.cfl_safety = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = FlowConfig{};
  c.monitor_stride = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(FlowConfig{}.validate());
}

TEST(CurvaturePower, FractionalPowerNeedsPositiveH) {
  EXPECT_DOUBLE_EQ(curvature_power(-0.3, 1.0), -0.3);
  EXPECT_DOUBLE_EQ(curvature_power(0.25, 0.5), 0.5);
  EXPECT_THROW(curvature_power(0.0, 0.5, 7), NonpositiveCurvature);
  try {
    curvature_power(-1.0, 0.5, 7);
  } catch (const NonpositiveCurvature& e) {
    EXPECT_EQ(e.node(), 7u);
  }
}

TEST(Rhs, HomogeneousExpDecayTranslatesAtSpeedN) {
  for (int n : {1, 2}) {
    const Grid grid = Grid::uniform(n, 16, kTwoPi);
    const GraphState s(0.0, std::vector<double>(grid.node_count(), 0.0), grid,
                       SpacetimeChart::robertson_walker(n, ScaleFactor::exp_decay()));
    FlowConfig c;
    for (double du : rhs(s, c)) EXPECT_NEAR(du, -n, 1e-13);
  }
}

TEST(Rhs, NonpositiveForAdmissibleData) {
  const GraphState s = crossing_state(1, 64, 1.0, 0.05);
  FlowConfig c;
  c.p = 0.5;
  c.tau = 0.5;
  for (double du : rhs(s, c)) EXPECT_LE(du, 0.0);
}

TEST(StableDt, CappedByRemainingTime) {
  const GraphState s = crossing_state(1, 32, 1.0);
  FlowConfig c;
  c.t_max = 1e-6;
  EXPECT_DOUBLE_EQ(stable_dt(s, c), 1e-6);
  c.t_max = 10.0;
  const double h = s.grid.min_spacing();
  // Principal coefficient at H = 1 is e^{x0^2} = e.
  EXPECT_NEAR(stable_dt(s, c), c.cfl_safety * h * h / std::exp(1.0), 1e-15);
}

TEST(StableDt, StiffnessErrorWhenStepCollapses) {
  const GraphState s = crossing_state(1, 32, 1e-30);
  FlowConfig c;
  c.p = 0.5;
  c.tau = 0.0;
  EXPECT_THROW(stable_dt(s, c), StiffnessError);
}

TEST(Run, ExactTranslationOnExpDecay) {
  for (int n : {1, 2}) {
    const Grid grid = Grid::uniform(n, 16, kTwoPi);
    const GraphState s(0.0, std::vector<double>(grid.node_count(), 0.0), grid,
                       SpacetimeChart::robertson_walker(n, ScaleFactor::exp_decay()));
    FlowConfig c;
    c.tau = 0.4;
    c.t_max = 0.5;
    const RunResult r = run(s, c);
    EXPECT_EQ(r.termination, Termination::TimeExhausted);
    EXPECT_DOUBLE_EQ(r.final_state.t, 0.5);
    EXPECT_NEAR(r.monitors.back().inf_u, -(n - 0.4) * 0.5, 1e-8);
  }
}

TEST(Run, HalfPowerMatchesOdeOracle) {
  const GraphState s = crossing_state(1, 32, 1.0);
  FlowConfig c;
  c.p = 0.5;
  c.tau = 0.5;
  c.t_max = 40.0;
  c.integrator = Integrator::RK2;
  const RunResult r = run(s, c);
  ASSERT_EQ(r.termination, Termination::Stationary);
  for (const auto& m : r.monitors) {
    EXPECT_NEAR(m.mean_u, half_power_oracle(m.t, 1.0, 0.5), 5e-6) << "t = " << m.t;
    EXPECT_LE(m.sup_u - m.inf_u, 1e-12);
  }
  EXPECT_NEAR(r.monitors.back().sup_H, 0.25, 1e-5);
}

TEST(Run, FrozenOracleCheckpoints) {
  // u(5) for u0 = 1: p = 1/2, tau = 1/2 and p = 1, tau = 0.3.
  EXPECT_NEAR(half_power_oracle(5.0, 1.0, 0.5), 0.25907545336940937, 1e-12);
  EXPECT_NEAR(half_power_oracle(1.0, 1.0, 0.5), 0.61398452316910105, 1e-12);
  const GraphState s = crossing_state(1, 16, 1.0);
  FlowConfig c;
  c.tau = 0.3;
  c.t_max = 5.0;
  c.integrator = Integrator::RK2;
  const RunResult r = run(s, c);
  EXPECT_NEAR(r.monitors.back().mean_u, 0.30471656289935983, 1e-5);
}

TEST(Run, RejectsInadmissibleInitialData) {
  FlowConfig c;
  c.p = 1.0;
  c.tau = 0.8;
  EXPECT_THROW(run(crossing_state(1, 16, 0.5), c), InadmissibleInitialData);
  c.tau = 0.0;
  EXPECT_THROW(run(crossing_state(1, 16, -0.2), c), InadmissibleInitialData);
  c.p = 0.5;
  c.tau = 0.1;
  EXPECT_THROW(run(crossing_state(1, 16, 0.0), c), InadmissibleInitialData);
  c.p = 2.0;
  EXPECT_THROW(run(crossing_state(1, 16, 1.0), c), ConfigError);
}

TEST(Run, StationaryImmediatelyOnTargetSlice) {
  FlowConfig c;
  c.tau = 0.4;
  const RunResult r = run(crossing_state(2, 8, 0.4), c);
  EXPECT_EQ(r.termination, Termination::Stationary);
  EXPECT_EQ(r.steps, 0u);
  EXPECT_EQ(r.monitors.size(), 1u);
}

TEST(Run, TiltGuardAborts) {
  FlowConfig c;
  c.vtilde_max = 1.0001;
  c.tau = 0.3;
  const RunResult r = run(crossing_state(1, 64, 1.0, 0.05), c);
  EXPECT_EQ(r.termination, Termination::Aborted);
  EXPECT_NE(r.abort_reason.find("tilt"), std::string::npos);
}

TEST(Run, MonitorStrideKeepsTerminalRecord) {
  FlowConfig c;
  c.tau = 0.3;
  c.t_max = 0.5;
  c.monitor_stride = 7;
  c.snapshot_stride = 50;
  const RunResult r = run(crossing_state(1, 32, 1.0), c);
  ASSERT_GE(r.monitors.size(), 2u);
  for (std::size_t i = 0; i + 1 < r.monitors.size(); ++i) EXPECT_EQ(r.monitors[i].step % 7, 0u);
  EXPECT_EQ(r.monitors.back().step, r.steps);
  EXPECT_DOUBLE_EQ(r.monitors.back().t, 0.5);
  EXPECT_EQ(r.monitors.back().dt_used, 0.0);
  EXPECT_DOUBLE_EQ(r.snapshots.front().t, 0.0);
  EXPECT_DOUBLE_EQ(r.snapshots.back().t, 0.5);
}

TEST(Run, EulerAndRk2AgreeToFirstOrder) {
  FlowConfig c;
  c.tau = 0.3;
  c.t_max = 1.0;
  const RunResult euler = run(crossing_state(1, 32, 1.0), c);
  c.integrator = Integrator::RK2;
  const RunResult rk2 = run(crossing_state(1, 32, 1.0), c);
  const double exact = 0.3 + 0.7 * std::exp(-1.0);
  EXPECT_NEAR(rk2.final_state.u[0], exact, 5e-6);
  EXPECT_NEAR(euler.final_state.u[0], exact, 1e-3);
  EXPECT_GT(std::abs(euler.final_state.u[0] - exact), std::abs(rk2.final_state.u[0] - exact));
}

TEST(FlowProperty, HomogeneousDataStaysHomogeneous) {
  for (int n : {1, 2}) {
    GraphState s = crossing_state(n, 16, 0.9);
    FlowConfig c;
    c.p = 0.5;
    c.tau = 0.3;
    for (int k = 0; k < 50; ++k) {
      s = step(s, stable_dt(s, c), c);
      ASSERT_LE(spread(s.u), 1e-12);
    }
  }
}

TEST(FlowProperty, HeightIsPointwiseNonincreasing) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> amp(0.0, 0.05);
  for (int trial = 0; trial < 3; ++trial) {
    GraphState s = crossing_state(1, 48, 1.0, amp(rng));
    FlowConfig c;
    c.p = trial == 0 ? 1.0 : 0.5;
    c.tau = 0.4;
    for (int k = 0; k < 200; ++k) {
      GraphState next = step(s, stable_dt(s, c), c);
      for (std::size_t i = 0; i < s.u.size(); ++i) ASSERT_LE(next.u[i], s.u[i] + 1e-14);
      s = std::move(next);
    }
  }
}

TEST(TauSweep, SingleEntryIsTriviallyCauchy) {
  FlowConfig c;
  c.t_max = 40.0;
  c.integrator = Integrator::RK2;
  const std::vector<double> taus{0.3};
  const SweepResult r = tau_sweep(crossing_state(1, 16, 1.0), c, taus);
  EXPECT_TRUE(r.complete);
  EXPECT_TRUE(r.cauchy);
  EXPECT_TRUE(r.distances.empty());
}

TEST(TauSweep, LimitsApproachTargetSlices) {
  FlowConfig c;
  c.t_max = 40.0;
  c.integrator = Integrator::RK2;
  const std::vector<double> taus{0.4, 0.2, 0.1};
  const SweepResult r = tau_sweep(crossing_state(1, 16, 1.0), c, taus);
  ASSERT_TRUE(r.cauchy);
  ASSERT_EQ(r.distances.size(), 2u);
  EXPECT_NEAR(r.distances[0], 0.2, 1e-5);
  EXPECT_NEAR(r.distances[1], 0.1, 1e-5);
  for (const auto& e : r.entries) EXPECT_LT(e.sup_H_error, 1e-5);
}

TEST(TauSweep, ZeroTauReachesMaximalSlice) {
  FlowConfig c;
  c.t_max = 40.0;
  c.integrator = Integrator::RK2;
  const std::vector<double> taus{0.2, 0.0};
  const SweepResult r = tau_sweep(crossing_state(1, 16, 1.0), c, taus);
  ASSERT_TRUE(r.complete);
  EXPECT_EQ(r.entries.back().termination, Termination::Stationary);
  EXPECT_LT(r.entries.back().sup_abs_H, c.eps_stationary);
}

TEST(TauSweep, FailingRunStopsTheSweep) {
  FlowConfig c;
  c.t_max = 40.0;
  const std::vector<double> taus{2.0, 0.5};
  const SweepResult r = tau_sweep(crossing_state(1, 16, 1.0), c, taus);
  EXPECT_FALSE(r.complete);
  EXPECT_FALSE(r.cauchy);
  EXPECT_EQ(r.entries.size(), 1u);
  EXPECT_FALSE(r.error.empty());
}
