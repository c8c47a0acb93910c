#pragma once

// Ambient Lorentzian spacetimes in Gaussian coordinates
//
//   ds^2 = e^{2 psi} ( -(dx^0)^2 + sigma_ij(x^0, x) dx^i dx^j )
//
// over a flat torus of spatial dimension n in {1, 2}. Two families carry
// hand-derived closed forms (Minkowski torus, Robertson-Walker with a named
// scale factor); the custom family takes user callables for psi and sigma and
// derives every connection and curvature quantity by central differences.
//
// Curvature convention: R^a_{bcd} = d_c G^a_{bd} - d_d G^a_{bc} + G^a_{ce} G^e_{bd} - G^a_{de} G^e_{bc},
// R_{abcd} = g_{ae} R^e_{bcd}, Ric_{bd} = R^a_{bad}. Minkowski is Ricci flat and
// Ric(nu, nu) = -n a''/a for the unit slice normal of a Robertson-Walker chart.

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pmcf/tensor.hpp"

namespace pmcf {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// A point (x^0, x) of the chart; x lives on the torus [0, L_1) x ... x [0, L_n).
struct ChartPoint {
  double x0 = 0.0;
  Vec2 x{};
};

/// Scale factor a(x^0) > 0 of a Robertson-Walker chart, with its first two derivatives.
struct ScaleFactor {
  std::string name;
  std::function<double(double)> a;
  std::function<double(double)> a_dot;
  std::function<double(double)> a_ddot;

  /// a = exp(-x0). De Sitter in flat slicing: every slice has H = n.
  static ScaleFactor exp_decay();
  /// a = exp(-x0^2 / (2n)). The slice x0 = c has mean curvature exactly c.
  static ScaleFactor crossing(int n);
  /// a = 1.
  static ScaleFactor constant();
  /// Looks up "exp(-t)", "crossing" or "const". Throws ConfigError for anything else.
  static ScaleFactor preset(std::string_view name, int n);
};

enum class ChartFamily { MinkowskiTorus, RobertsonWalker, Custom };

std::string_view to_string(ChartFamily family);

/// User-supplied metric data for the custom family. Only values are required.
struct CustomMetric {
  std::function<double(double x0, const Vec2& x)> psi;
  std::function<Mat2(double x0, const Vec2& x)> sigma;
  /// Central-difference step for first derivatives of the metric.
  double fd_step = 1e-5;
  /// Central-difference step for derivatives of Christoffel symbols and second derivatives of psi.
  double curvature_step = 1e-4;
};

/// psi with its gradient and Hessian in chart coordinates (x^0, x^1, ..., x^n).
struct ConformalFactor {
  double value = 0.0;
  Vec3 grad{};
  Mat3 hess{};
};

namespace detail {
class ChartModel;
}

/// Immutable handle to an ambient chart. Cheap to copy; safe to query concurrently.
class SpacetimeChart {
 public:
  static SpacetimeChart minkowski(int n, Vec2 periods = {kTwoPi, kTwoPi});
  static SpacetimeChart robertson_walker(int n, ScaleFactor a, Vec2 periods = {kTwoPi, kTwoPi});
  static SpacetimeChart custom(int n, CustomMetric metric, Vec2 periods = {kTwoPi, kTwoPi});

  int n() const { return n_; }
  int ambient_dim() const { return n_ + 1; }
  ChartFamily family() const;
  /// Scale factor preset name for Robertson-Walker charts, empty otherwise.
  const std::string& scale_name() const;
  const Vec2& periods() const { return periods_; }

  /// Reduces the spatial coordinates modulo the torus periods.
  ChartPoint reduce(ChartPoint pt) const;

  ConformalFactor conformal_factor(const ChartPoint& pt) const;
  /// psi alone, without derivatives.
  double psi(const ChartPoint& pt) const;
  /// sigma_ij; throws DomainError unless positive definite.
  Mat2 spatial_metric(const ChartPoint& pt) const;
  /// d sigma_ij / d x^0.
  Mat2 spatial_metric_dot(const ChartPoint& pt) const;
  /// Full ambient metric g_{alpha beta}.
  Mat3 metric(const ChartPoint& pt) const;
  Mat3 inverse_metric(const ChartPoint& pt) const;
  Christoffel christoffel(const ChartPoint& pt) const;
  ChristoffelGradient christoffel_gradient(const ChartPoint& pt) const;
  Riemann riemann(const ChartPoint& pt) const;
  Mat3 ricci(const ChartPoint& pt) const;

 private:
  SpacetimeChart(int n, Vec2 periods, std::shared_ptr<const detail::ChartModel> model);

  int n_;
  Vec2 periods_;
  std::shared_ptr<const detail::ChartModel> model_;
};

/// Ambient Christoffel symbols at pt (symmetric in the lower pair).
Christoffel christoffel_bar(const SpacetimeChart& chart, const ChartPoint& pt);

/// Second fundamental form of the slice {x^0 = const} through pt:
/// e^psi ( -1/2 sigma_dot_ij - psi_dot sigma_ij ).
Mat2 slice_second_fundamental_form(const SpacetimeChart& chart, const ChartPoint& pt);

/// Mean curvature of the slice through pt, e^{-2 psi} sigma^ij hbar_ij.
double slice_mean_curvature(const SpacetimeChart& chart, const ChartPoint& pt);

/// Ric(nu, nu) for a unit timelike nu. Throws std::invalid_argument if |<nu,nu> + 1| > 1e-10.
double ricci_timelike(const SpacetimeChart& chart, const ChartPoint& pt, const Vec3& nu);

/// Generic Riemann tensor from Christoffels and their partial derivatives.
Riemann riemann_from_connection(const Christoffel& gamma, const ChristoffelGradient& dgamma,
                                const Mat3& metric, int dim);

/// Ric_{bd} = R^a_{bad} for a fully covariant Riemann tensor.
Mat3 ricci_from_riemann(const Riemann& riemann, const Mat3& inverse_metric, int dim);

struct LambdaRegion {
  double x0_min = 0.0;
  double x0_max = 0.0;
};

struct LambdaOptions {
  /// Boost rapidities applied to the slice normal along +-e_i for each axis.
  std::vector<double> rapidities{0.0, 0.5, 1.0};
};

/// Lower Ricci bound Lambda = max(0, -min Ric(nu, nu)) over a nested quasi-random
/// lattice of `samples` points in region x torus and the configured direction
/// family. The lattice for k samples is a prefix of the lattice for k + 1, so the
/// result is nondecreasing in `samples`. Throws std::invalid_argument for an empty
/// region or samples < 1.
double lambda_bound(const SpacetimeChart& chart, const LambdaRegion& region, int samples,
                    const LambdaOptions& options = {});

/// k-th point of the lattice used by lambda_bound.
ChartPoint lambda_lattice_point(const SpacetimeChart& chart, const LambdaRegion& region, int k);

}  // namespace pmcf
