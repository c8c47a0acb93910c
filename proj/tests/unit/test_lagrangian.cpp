#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pmcf/errors.hpp"
#include "pmcf/graph_geometry.hpp"
#include "pmcf/lagrangian.hpp"

using namespace pmcf;

namespace {

double inner(const Mat3& G, const Vec3& a, const Vec3& b) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += G[i][j] * a[i] * b[j];
  return s;
}

ParametricState slice_curve(const SpacetimeChart& chart, double height, int samples) {
  std::vector<Vec3> x(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) x[static_cast<std::size_t>(k)] = {height, kTwoPi * k / samples, 0.0};
  return ParametricState(0.0, std::move(x), chart);
}

}  // namespace

TEST(CurveGeometry, StraightMinkowskiSliceIsFlat) {
  const CurveGeometry g = curve_geometry(slice_curve(SpacetimeChart::minkowski(1), 0.4, 32));
  for (std::size_t k = 0; k < g.H.size(); ++k) {
    EXPECT_EQ(g.h11[k], 0.0);
    EXPECT_EQ(g.H[k], 0.0);
    EXPECT_NEAR(g.g11[k], 1.0, 1e-14);
    EXPECT_DOUBLE_EQ(g.vtilde[k], 1.0);
  }
}

TEST(CurveGeometry, ExpDecaySliceHasUnitCurvature) {
  const auto chart = SpacetimeChart::robertson_walker(1, ScaleFactor::exp_decay());
  const CurveGeometry g = curve_geometry(slice_curve(chart, -0.3, 32));
  for (double H : g.H) EXPECT_NEAR(H, 1.0, 1e-13);
}

TEST(CurveGeometry, AgreesWithGraphGeometry) {
  const int N = 128;
  const auto chart = SpacetimeChart::minkowski(1);
  const CurveGeometry cg = curve_geometry(sinusoid_curve(chart, 0.3, N));
  const Grid grid = Grid::uniform(1, N, kTwoPi);
  std::vector<double> u(grid.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.3 * std::sin(grid.coordinates(i)[0]);
  const GeometryFields gf = assemble_geometry(GraphState(0.0, u, grid, chart));
  const double h = kTwoPi / N;
  for (std::size_t k = 0; k < gf.size(); ++k) {
    EXPECT_NEAR(cg.H[k], gf.H[k], 2.0 * h * h);
    EXPECT_NEAR(cg.vtilde[k], gf.vtilde[k], h * h);
  }
}

TEST(CurveGeometry, NormalIsUnitPastDirectedAndOrthogonal) {
  const auto chart = SpacetimeChart::robertson_walker(1, ScaleFactor::exp_decay());
  const ParametricState s = sinusoid_curve(chart, 0.2, 64);
  const CurveGeometry g = curve_geometry(s);
  for (std::size_t k = 0; k < g.H.size(); ++k) {
    const Mat3 G = chart.metric({s.x[k][0], {s.x[k][1], 0.0}});
    EXPECT_NEAR(inner(G, g.nu[k], g.nu[k]), -1.0, 1e-13);
    EXPECT_NEAR(inner(G, g.nu[k], g.tangent[k]), 0.0, 1e-13);
    EXPECT_LT(g.nu[k][0], 0.0);
    EXPECT_NEAR(g.normA2[k], g.H[k] * g.H[k], 1e-15);
  }
}

TEST(CurveGeometry, TimelikeTangentIsRejected) {
  EXPECT_THROW(curve_geometry(sinusoid_curve(SpacetimeChart::minkowski(1), 1.5, 64)), SpacelikeViolation);
}

TEST(ParametricState, RequiresOneSpatialDimension) {
  EXPECT_THROW(sinusoid_curve(SpacetimeChart::minkowski(2), 0.1, 32), std::invalid_argument);
  EXPECT_THROW(sinusoid_curve(SpacetimeChart::minkowski(1), 0.1, 4), std::invalid_argument);
}

TEST(ParametricState, SeamShiftsByThePeriod) {
  const ParametricState s = sinusoid_curve(SpacetimeChart::minkowski(1), 0.1, 16);
  EXPECT_NEAR(s.at(15, 1)[1], kTwoPi, 1e-15);
  EXPECT_NEAR(s.at(0, -1)[1], s.x[15][1] - kTwoPi, 1e-15);
}

TEST(FlowStepLagrangian, ZeroStepIsIdentity) {
  const ParametricState s = sinusoid_curve(SpacetimeChart::minkowski(1), 0.3, 32);
  const ParametricState t = flow_step_lagrangian(s, 0.0, 1.0, 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s.x[k], t.x[k]);
}

TEST(FlowStepLagrangian, MinkowskiSliceIsStationary) {
  const ParametricState s = slice_curve(SpacetimeChart::minkowski(1), 0.1, 32);
  const ParametricState t = flow_step_lagrangian(s, 0.3, 1.0, 0.0, Integrator::RK2);
  for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s.x[k], t.x[k]);
}

TEST(FlowStepLagrangian, ExpDecaySliceMovesAtSpeedHpMinusTau) {
  const auto chart = SpacetimeChart::robertson_walker(1, ScaleFactor::exp_decay());
  const double p = 0.5, tau = 0.2, dt = 1e-3;
  const ParametricState s = slice_curve(chart, 0.0, 32);
  const ParametricState t = flow_step_lagrangian(s, dt, p, tau);
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_NEAR(t.x[k][0], -(1.0 - tau) * dt, 1e-15);
    EXPECT_NEAR(t.x[k][1], s.x[k][1], 1e-15);
  }
}

TEST(FlowStepLagrangian, FractionalPowerNeedsPositiveH) {
  const ParametricState s = sinusoid_curve(SpacetimeChart::minkowski(1), 0.3, 32);
  EXPECT_THROW(flow_step_lagrangian(s, 1e-3, 0.5, 0.0), NonpositiveCurvature);
}

TEST(FlowStepLagrangian, NormalStaysUnitToFirstOrder) {
  const auto chart = SpacetimeChart::robertson_walker(1, ScaleFactor::exp_decay());
  for (double dt : {1e-2, 5e-3}) {
    ParametricState s = sinusoid_curve(chart, 0.1, 64);
    for (int k = 0; k < 10; ++k) s = flow_step_lagrangian(s, dt, 0.5, 0.2);
    const CurveGeometry g = curve_geometry(s);
    for (std::size_t k = 0; k < g.H.size(); ++k) {
      const Mat3 G = chart.metric({s.x[k][0], {s.x[k][1], 0.0}});
      EXPECT_NEAR(inner(G, g.nu[k], g.nu[k]), -1.0, 1e-12);
    }
  }
}

TEST(EvolutionRhs, ChainRuleConsistency) {
  // d(H^p)/dt = p H^{p-1} dH/dt once lap(H^p) is expanded by the chain rule.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    CurvatureEvolutionInputs in;
    in.p = trial % 5 == 0 ? 1.0 : U(rng) / 2.0;
    in.tau = U(rng) - 0.1;
    in.H = U(rng);
    in.lap_H = U(rng) - 1.0;
    in.grad_H2 = U(rng);
    in.lap_Hp = in.p * std::pow(in.H, in.p - 1) * in.lap_H +
                in.p * (in.p - 1) * std::pow(in.H, in.p - 2) * in.grad_H2;
    in.normA2 = in.H * in.H;
    in.ricci_nn = U(rng) - 1.0;
    const double lhs = hp_evolution_rhs(in);
    const double rhs = in.p * std::pow(in.H, in.p - 1) * h_evolution_rhs(in);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(EvolutionRhs, HomogeneousCrossingSliceBalances) {
  // Constant H = x0 on a crossing slice: dH/dt = -(H^p - tau)(H^2 + 1 - H^2).
  CurvatureEvolutionInputs in;
  in.p = 0.5;
  in.tau = 0.2;
  in.H = 0.8;
  in.normA2 = 0.64;
  in.ricci_nn = 1.0 - 0.64;
  EXPECT_NEAR(h_evolution_rhs(in), -(std::sqrt(0.8) - 0.2), 1e-15);
}

TEST(Identities, NamesRoundTrip) {
  for (Identity id : all_identities()) EXPECT_EQ(parse_identity(to_string(id)), id);
  EXPECT_FALSE(parse_identity("ricci").has_value());
  EXPECT_EQ(parse_fixture("robertson-walker"), Fixture::RobertsonWalkerSinusoid);
  EXPECT_FALSE(parse_fixture("de-sitter").has_value());
  EXPECT_EQ(all_identities().size(), 7u);
}

TEST(Identities, StructureEquationsHoldExactly) {
  for (Fixture f : {Fixture::MinkowskiSinusoid, Fixture::RobertsonWalkerSinusoid}) {
    EXPECT_LE(identity_residual(Identity::Codazzi, f, 0.1, 64), kExactResidual);
    EXPECT_LE(identity_residual(Identity::Gauss, f, 0.1, 64), kExactResidual);
    const ResidualReport r = verify_identity(Identity::Gauss, f, VerifyOptions::with_levels(3));
    EXPECT_TRUE(r.exact);
    EXPECT_FALSE(r.slope_dt.has_value());
    EXPECT_TRUE(r.meets_thresholds());
  }
}

TEST(Identities, MixedTensorMatchesMeanCurvatureEquation) {
  // With one tangent direction h_1^1 = H, so both assemblies must agree to round-off.
  for (Fixture f : {Fixture::MinkowskiSinusoid, Fixture::RobertsonWalkerSinusoid}) {
    const double a = identity_residual(Identity::HEvolution, f, 0.01, 128);
    const double b = identity_residual(Identity::MixedHij, f, 0.01, 128);
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, a));
  }
}

TEST(Identities, ResidualsShrinkUnderJointRefinement) {
  for (Fixture f : {Fixture::MinkowskiSinusoid, Fixture::RobertsonWalkerSinusoid})
    for (Identity id : {Identity::MetricEvolution, Identity::HEvolution, Identity::HpEvolution, Identity::Tilt}) {
      const double coarse = identity_residual(id, f, 0.08, 64);
      const double fine = identity_residual(id, f, 0.04, 128);
      EXPECT_LT(fine, coarse / 3.0) << to_string(id) << " on " << to_string(f);
    }
}

TEST(VerifyIdentity, TiltConvergesOnBothFixtures) {
  for (Fixture f : {Fixture::MinkowskiSinusoid, Fixture::RobertsonWalkerSinusoid}) {
    const ResidualReport r = verify_identity(Identity::Tilt, f, VerifyOptions::with_levels(4));
    ASSERT_TRUE(r.slope_dt && r.slope_h);
    EXPECT_GE(*r.slope_dt, kMinSlopeDt);
    EXPECT_GE(*r.slope_h, kMinSlopeH);
    EXPECT_EQ(r.dt_sweep.size(), 4u);
    EXPECT_EQ(r.h_sweep.size(), 4u);
  }
}

TEST(VerifyIdentity, NeedsThreeLevels) {
  EXPECT_THROW(VerifyOptions::with_levels(2), std::invalid_argument);
  VerifyOptions o = VerifyOptions::with_levels(3);
  o.samples.pop_back();
  EXPECT_THROW(verify_identity(Identity::Tilt, Fixture::MinkowskiSinusoid, o), std::invalid_argument);
}

TEST(LoglogSlope, RecoversPowerLaws) {
  const std::vector<double> x{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v);
  EXPECT_NEAR(loglog_slope(x, y), 2.0, 1e-12);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(loglog_slope({1.0, 2.0}, {0.0, 1.0}), std::invalid_argument);
}
