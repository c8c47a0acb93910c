#pragma once

// Parametric (Lagrangian) flow of closed spacelike curves in 1+1 dimensional
// charts, x' = (H^p - tau) nu, and numerical residuals of the evolution
// identities and structure equations along tracked material points.
//
// Curves are sampled at xi_k = k * 2 pi / N on the parameter circle. The spatial
// coordinate is stored unwrapped: sample k + N sits at x^1_k + L where L is the
// chart period, so differences across the seam stay smooth.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmcf/flow.hpp"
#include "pmcf/spacetime.hpp"
#include "pmcf/tensor.hpp"

namespace pmcf {

struct ParametricState {
  double t = 0.0;
  /// x^alpha(xi_k), alpha in {0, 1}; x^1 unwrapped.
  std::vector<Vec3> x;
  SpacetimeChart chart;

  ParametricState(double t_, std::vector<Vec3> x_, SpacetimeChart chart_);

  std::size_t size() const { return x.size(); }
  double dxi() const;
  /// Position of sample k + offset, with the period shift applied across the seam.
  Vec3 at(std::size_t k, int offset) const;
};

/// Per-sample geometry of a parametric curve.
struct CurveGeometry {
  std::vector<Vec3> tangent;  ///< x_xi
  std::vector<double> g11;    ///< <x_xi, x_xi>
  std::vector<Vec3> nu;       ///< past-directed unit normal
  std::vector<double> h11;    ///< -<x_{;11}, nu>
  std::vector<double> H;      ///< g^11 h11
  std::vector<double> normA2; ///< h_ij h^ij = H^2
  std::vector<double> vtilde; ///< <eta, nu> with eta = -e^psi dx^0
};

/// Throws SpacelikeViolation if a tangent is not spacelike.
CurveGeometry curve_geometry(const ParametricState& state);

/// x <- x + dt (H^p - tau) nu (Euler) or its Heun variant.
ParametricState flow_step_lagrangian(const ParametricState& state, double dt, double p, double tau,
                                     Integrator integrator = Integrator::Euler);

/// Closed curve x(xi) = (amplitude sin(xi), xi) in the given chart (n must be 1).
ParametricState sinusoid_curve(const SpacetimeChart& chart, double amplitude, int samples);

enum class Identity { MetricEvolution, HEvolution, HpEvolution, MixedHij, Tilt, Codazzi, Gauss };

std::string_view to_string(Identity identity);
std::optional<Identity> parse_identity(std::string_view name);
const std::vector<Identity>& all_identities();

enum class Fixture { MinkowskiSinusoid, RobertsonWalkerSinusoid };

std::string_view to_string(Fixture fixture);
std::optional<Fixture> parse_fixture(std::string_view name);

struct FixtureSpec {
  SpacetimeChart chart;
  double amplitude;
  double p;
  double tau;
};

/// Minkowski: amplitude 0.3, p = 1, tau = 0. Robertson-Walker a = e^{-x0}: amplitude 0.1, p = 1/2, tau = 0.2.
FixtureSpec fixture_spec(Fixture fixture);

/// Pointwise inputs of the mean curvature evolution right-hand sides.
struct CurvatureEvolutionInputs {
  double p = 1.0;
  double tau = 0.0;
  double H = 0.0;
  double lap_H = 0.0;       ///< Laplace-Beltrami of H
  double grad_H2 = 0.0;     ///< |grad H|^2
  double lap_Hp = 0.0;      ///< Laplace-Beltrami of H^p
  double normA2 = 0.0;
  double ricci_nn = 0.0;    ///< Ric(nu, nu)
};

/// Right-hand side of dH/dt.
double h_evolution_rhs(const CurvatureEvolutionInputs& in);
/// Right-hand side of d(H^p)/dt.
double hp_evolution_rhs(const CurvatureEvolutionInputs& in);

/// Max over samples of |LHS - RHS| for one identity, with the time derivative taken as
/// a centered difference over one Heun step of +-dt from the fixture curve.
double identity_residual(Identity identity, Fixture fixture, double dt, int samples);

struct ResidualRow {
  double dt = 0.0;
  double h = 0.0;
  double residual = 0.0;
};

struct VerifyOptions {
  std::vector<double> dts;
  std::vector<int> samples;
  /// Fixed resolution for the dt sweep and fixed step for the h sweep.
  int fine_samples = 0;
  double fine_dt = 0.0;

  /// dt_k = 0.2 / 2^k and N_k = 32 * 2^k for k < levels; requires levels >= 3.
  static VerifyOptions with_levels(int levels);
};

inline constexpr double kMinSlopeDt = 1.0;
inline constexpr double kMinSlopeH = 1.8;
/// Residuals at or below this level are round-off; an identity with every residual here is exact.
inline constexpr double kExactResidual = 1e-12;

struct ResidualReport {
  Identity identity{};
  Fixture fixture{};
  std::vector<ResidualRow> dt_sweep;
  std::vector<ResidualRow> h_sweep;
  /// Fitted log-log slopes; empty when the identity holds to round-off at every level.
  std::optional<double> slope_dt;
  std::optional<double> slope_h;
  bool exact = false;

  bool meets_thresholds() const;
};

/// Residual sweeps in dt (at fine h) and in h (at fine dt) with fitted slopes.
/// Throws std::invalid_argument when fewer than three levels are given.
ResidualReport verify_identity(Identity identity, Fixture fixture, const VerifyOptions& options);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pmcf
