#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pmcf/errors.hpp"
#include "pmcf/graph_geometry.hpp"

using namespace pmcf;

namespace {

// H of u = 0.3 sin x over the 1D Minkowski torus.
double sine_graph_H(double x) {
  const double c = std::cos(x);
  return 300.0 * std::sin(x) / std::pow(100.0 - 9.0 * c * c, 1.5);
}

GraphState sine_graph(int N, double amplitude = 0.3) {
  const Grid grid = Grid::uniform(1, N, kTwoPi);
  std::vector<double> u(grid.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = amplitude * std::sin(grid.coordinates(i)[0]);
  return GraphState(0.0, u, grid, SpacetimeChart::minkowski(1));
}

double max_error(int N) {
  const GraphState s = sine_graph(N);
  const GeometryFields f = assemble_geometry(s);
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    err = std::max(err, std::abs(f.H[i] - sine_graph_H(s.grid.coordinates(i)[0])));
  return err;
}

}  // namespace

TEST(CurvatureOracle, FrozenValues) {
  EXPECT_NEAR(sine_graph_H(M_PI / 2), 0.3, 1e-15);
  EXPECT_NEAR(sine_graph_H(1.0), 0.26272708294488882, 1e-15);
}

TEST(GraphGeometry, SineGraphMatchesClosedForm) {
  const GraphState s = sine_graph(256);
  const GeometryFields f = assemble_geometry(s);
  // Node 64 sits at pi/2.
  EXPECT_NEAR(f.H[64], 0.3, 1e-4);
  EXPECT_LT(max_error(256), 1e-4);
}

TEST(GraphGeometry, SecondOrderConvergence) {
  double prev = max_error(32);
  for (int N : {64, 128, 256}) {
    const double err = max_error(N);
    EXPECT_GT(std::log2(prev / err), 1.8) << "N = " << N;
    prev = err;
  }
}

TEST(GraphGeometry, ConstantGraphHasSliceCurvature) {
  for (int n : {1, 2}) {
    const Grid grid = Grid::uniform(n, 16, kTwoPi);
    const auto crossing = SpacetimeChart::robertson_walker(n, ScaleFactor::crossing(n));
    const GraphState s(0.0, std::vector<double>(grid.node_count(), 0.7), grid, crossing);
    const GeometryFields f = assemble_geometry(s);
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_NEAR(f.H[i], 0.7, 1e-13);
      EXPECT_NEAR(f.normA2[i], 0.49 / n, 1e-13);
      EXPECT_DOUBLE_EQ(f.v[i], 1.0);
      EXPECT_DOUBLE_EQ(f.vtilde[i], 1.0);
    }
  }
}

TEST(GraphGeometry, NormalIsUnitAndOrthogonal) {
  const GraphState s = sine_graph(64, 0.5);
  const GeometryFields f = assemble_geometry(s);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3& nu = f.nu[i];
    EXPECT_NEAR(-nu[0] * nu[0] + nu[1] * nu[1], -1.0, 1e-13);
    EXPECT_LT(nu[0], 0.0);
    // Tangent (u', 1).
    EXPECT_NEAR(-nu[0] * f.du[i][0] + nu[1], 0.0, 1e-13);
    EXPECT_NEAR(f.vtilde[i] * f.v[i], 1.0, 1e-14);
  }
}

TEST(GraphGeometry, OneDimensionalNormEqualsHSquared) {
  const GraphState s = sine_graph(64);
  const GeometryFields f = assemble_geometry(s);
  const auto norm = second_fundamental_norm(f);
  const auto H = mean_curvature(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_NEAR(norm[i], H[i] * H[i], 1e-13);
    EXPECT_NEAR(H[i], f.H[i], 1e-15);
  }
}

TEST(GraphGeometry, TwoDimensionalGraphOfOneVariableMatchesCurve) {
  const int N = 64;
  const Grid g2 = Grid::uniform(2, N, kTwoPi);
  std::vector<double> u(g2.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.3 * std::sin(g2.coordinates(i)[0]);
  const GeometryFields f2 = assemble_geometry(GraphState(0.0, u, g2, SpacetimeChart::minkowski(2)));
  const GeometryFields f1 = assemble_geometry(sine_graph(N));
  for (int j : {0, 17, 40})
    for (int i = 0; i < N; ++i) EXPECT_NEAR(f2.H[g2.index(i, j)], f1.H[static_cast<std::size_t>(i)], 1e-12);
}

TEST(GraphGeometry, RotationallyEquivalentDirections) {
  // u(x, y) = f(x) and u(x, y) = f(y) give transposed fields.
  const int N = 32;
  const Grid grid = Grid::uniform(2, N, kTwoPi);
  std::vector<double> ux(grid.node_count()), uy(grid.node_count());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const Vec2 x = grid.coordinates(grid.index(i, j));
      ux[grid.index(i, j)] = 0.2 * std::cos(2 * x[0]);
      uy[grid.index(i, j)] = 0.2 * std::cos(2 * x[1]);
    }
  const auto chart = SpacetimeChart::robertson_walker(2, ScaleFactor::exp_decay());
  const GeometryFields fx = assemble_geometry(GraphState(0.0, ux, grid, chart));
  const GeometryFields fy = assemble_geometry(GraphState(0.0, uy, grid, chart));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) EXPECT_NEAR(fx.H[grid.index(i, j)], fy.H[grid.index(j, i)], 1e-12);
}

TEST(GraphGeometry, SteepGraphIsSpacelikeViolation) {
  const GraphState s = sine_graph(64, 1.2);
  EXPECT_THROW(assemble_geometry(s), SpacelikeViolation);
  try {
    tilt(s.u, s.grid, s.chart);
  } catch (const SpacelikeViolation& e) {
    EXPECT_LT(e.node(), s.u.size());
  }
}

TEST(GraphGeometry, GuardBandRejectsNearlyNullGraphs) {
  // max |u'| = 0.9999 passes with a tiny guard and fails with a wide one.
  const GraphState s = sine_graph(4096, 0.9999);
  EXPECT_NO_THROW(tilt(s.u, s.grid, s.chart, 1e-6));
  EXPECT_THROW(tilt(s.u, s.grid, s.chart, 1e-2), SpacelikeViolation);
}

TEST(GraphGeometryProperty, SmallRandomGraphsStaySpacelikeAndSymmetric) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coeff(-0.05, 0.05);
  const Grid grid = Grid::uniform(2, 24, kTwoPi);
  const auto chart = SpacetimeChart::robertson_walker(2, ScaleFactor::crossing(2));
  for (int trial = 0; trial < 5; ++trial) {
    const double a = coeff(rng), b = coeff(rng), c = coeff(rng);
    std::vector<double> u(grid.node_count());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Vec2 x = grid.coordinates(i);
      u[i] = 0.5 + a * std::sin(x[0]) + b * std::cos(x[1]) + c * std::sin(x[0] + x[1]);
    }
    const GeometryFields f = assemble_geometry(GraphState(0.0, u, grid, chart));
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_GT(f.v[i], 0.0);
      EXPECT_LE(f.v[i], 1.0);
      EXPECT_DOUBLE_EQ(f.hij[i][0][1], f.hij[i][1][0]);
      EXPECT_GE(f.normA2[i], 0.0);
      // Cauchy-Schwarz: H^2 <= n ||A||^2.
      EXPECT_LE(f.H[i] * f.H[i], 2.0 * f.normA2[i] + 1e-12);
    }
  }
}

TEST(GraphState, RejectsMismatchedSizes) {
  const Grid grid = Grid::uniform(1, 16, kTwoPi);
  EXPECT_THROW(GraphState(0.0, std::vector<double>(15, 0.0), grid, SpacetimeChart::minkowski(1)),
               std::invalid_argument);
  EXPECT_THROW(GraphState(0.0, std::vector<double>(16, 0.0), grid, SpacetimeChart::minkowski(2)),
               std::invalid_argument);
}

TEST(Grid, RejectsCoarseOrInvalidGrids) {
  EXPECT_THROW(Grid::uniform(1, 4, kTwoPi), std::invalid_argument);
  EXPECT_THROW(Grid::uniform(3, 16, kTwoPi), std::invalid_argument);
  EXPECT_THROW(Grid::uniform(1, 16, 0.0), std::invalid_argument);
  const Grid g = Grid::uniform(2, 8, 1.0);
  EXPECT_EQ(g.neighbor(g.index(0, 0), -1, -1), g.index(7, 7));
  EXPECT_EQ(g.node_count(), 64u);
}
