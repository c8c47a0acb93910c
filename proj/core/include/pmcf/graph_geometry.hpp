#pragma once

// Induced geometry of the spacelike graph M = {x^0 = u(x)} over the torus.
//
// All derivatives are second-order centered differences on the periodic grid.
// The Hessian entering the second fundamental form is covariant with respect to
// the induced metric g; its Christoffel symbols come from centered differences
// of the assembled g_ij field.

#include <cstddef>
#include <span>
#include <vector>

#include "pmcf/grid.hpp"
#include "pmcf/spacetime.hpp"
#include "pmcf/tensor.hpp"

namespace pmcf {

/// Height function u on the grid at flow time t. Value type; never mutated in place by the flow.
struct GraphState {
  double t = 0.0;
  std::vector<double> u;
  Grid grid;
  SpacetimeChart chart;

  GraphState(double t_, std::vector<double> u_, Grid grid_, SpacetimeChart chart_);

  ChartPoint point(std::size_t node) const { return {u[node], grid.coordinates(node)}; }
};

struct GeometryOptions {
  /// Nodes with sigma^{ij} u_i u_j >= 1 - eps_guard are rejected.
  double eps_guard = 1e-6;
};

/// Per-node geometric data of a graph.
struct GeometryFields {
  int n = 1;
  std::vector<Vec2> du;
  std::vector<double> psi;     ///< conformal factor at (u(x), x)
  std::vector<double> v;       ///< sqrt(1 - |Du|^2)
  std::vector<double> vtilde;  ///< 1 / v
  std::vector<Mat2> g;         ///< induced metric
  std::vector<Mat2> ginv;      ///< inverse induced metric
  std::vector<Mat2> hij;       ///< second fundamental form w.r.t. the past-directed normal
  std::vector<double> H;       ///< g^ij h_ij
  std::vector<double> normA2;  ///< h_ij h^ij
  std::vector<Vec3> nu;        ///< past-directed unit normal

  std::size_t size() const { return H.size(); }
};

/// Centered differences u_i with periodic wrap.
std::vector<Vec2> spatial_gradient(std::span<const double> u, const Grid& grid);

struct TiltFields {
  std::vector<double> v;
  std::vector<double> vtilde;
};

/// v = sqrt(1 - sigma^ij u_i u_j) and vtilde = 1/v. Throws SpacelikeViolation at the first
/// node where sigma^ij u_i u_j >= 1 - eps_guard.
TiltFields tilt(std::span<const double> u, const Grid& grid, const SpacetimeChart& chart,
                double eps_guard = 1e-6);

/// Full geometry assembly. Throws SpacelikeViolation or DomainError.
GeometryFields assemble_geometry(const GraphState& state, const GeometryOptions& options = {});

/// h_ij per node (symmetric).
std::vector<Mat2> second_fundamental_form(std::span<const double> u, const Grid& grid,
                                          const SpacetimeChart& chart, double eps_guard = 1e-6);

/// H = g^ij h_ij per node.
std::vector<double> mean_curvature(const GeometryFields& fields);

/// ||A||^2 = g^ik g^jl h_ij h_kl per node.
std::vector<double> second_fundamental_norm(const GeometryFields& fields);

/// nu^alpha = -v^{-1} e^{-psi} (1, sigma^ij u_j) per node.
std::vector<Vec3> normal_vector(std::span<const double> u, const Grid& grid, const SpacetimeChart& chart,
                                double eps_guard = 1e-6);

}  // namespace pmcf
