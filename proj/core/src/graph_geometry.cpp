#include "pmcf/graph_geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "pmcf/errors.hpp"

namespace pmcf {

GraphState::GraphState(double t_, std::vector<double> u_, Grid grid_, SpacetimeChart chart_)
    : t(t_), u(std::move(u_)), grid(std::move(grid_)), chart(std::move(chart_)) {
  if (u.size() != grid.node_count())
    throw std::invalid_argument("graph state: u has " + std::to_string(u.size()) + " values for " +
                                std::to_string(grid.node_count()) + " grid nodes");
  if (chart.n() != grid.n()) throw std::invalid_argument("graph state: chart and grid dimensions differ");
}

std::vector<Vec2> spatial_gradient(std::span<const double> u, const Grid& grid) {
  const std::size_t count = grid.node_count();
  std::vector<Vec2> du(count, Vec2{});
  for (std::size_t node = 0; node < count; ++node)
    for (int a = 0; a < grid.n(); ++a)
      du[node][a] = (u[grid.neighbor_along(node, a, 1)] - u[grid.neighbor_along(node, a, -1)]) /
                    (2.0 * grid.spacing()[a]);
  return du;
}

namespace {

struct NodeTilt {
  double v;
  Vec2 u_up;  // sigma^ij u_j
};

NodeTilt node_tilt(const Vec2& du, const Mat2& sigma, int n, double eps_guard, std::size_t node) {
  Mat2 sinv;
  if (!invert(sigma, n, sinv)) throw DomainError("spatial metric is singular");
  NodeTilt out{0.0, Vec2{}};
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.u_up[i] += sinv[i][j] * du[j];
    norm2 += out.u_up[i] * du[i];
  }
  if (!(norm2 < 1.0 - eps_guard)) {
    std::ostringstream msg;
    msg << "graph is not spacelike at node " << node << " (|Du|^2 = " << norm2 << ")";
    throw SpacelikeViolation(msg.str(), node);
  }
  out.v = std::sqrt(1.0 - norm2);
  return out;
}

}  // namespace

TiltFields tilt(std::span<const double> u, const Grid& grid, const SpacetimeChart& chart,
                double eps_guard) {
  const auto du = spatial_gradient(u, grid);
  TiltFields out;
  out.v.resize(u.size());
  out.vtilde.resize(u.size());
  for (std::size_t node = 0; node < u.size(); ++node) {
    const ChartPoint pt{u[node], grid.coordinates(node)};
    const NodeTilt nt = node_tilt(du[node], chart.spatial_metric(pt), grid.n(), eps_guard, node);
    out.v[node] = nt.v;
    out.vtilde[node] = 1.0 / nt.v;
  }
  return out;
}

GeometryFields assemble_geometry(const GraphState& state, const GeometryOptions& options) {
  const Grid& grid = state.grid;
  const SpacetimeChart& chart = state.chart;
  const int n = grid.n();
  const std::size_t count = grid.node_count();
  const auto& u = state.u;

  GeometryFields f;
  f.n = n;
  f.du = spatial_gradient(u, grid);
  f.psi.resize(count);
  f.v.resize(count);
  f.vtilde.resize(count);
  f.g.assign(count, Mat2{});
  f.ginv.assign(count, Mat2{});
  f.hij.assign(count, Mat2{});
  f.nu.assign(count, Vec3{});
  std::vector<Christoffel> ambient(count);

  for (std::size_t node = 0; node < count; ++node) {
    const ChartPoint pt = state.point(node);
    const Mat2 sigma = chart.spatial_metric(pt);
    Mat2 sinv;
    invert(sigma, n, sinv);
    const NodeTilt nt = node_tilt(f.du[node], sigma, n, options.eps_guard, node);
    const double psi = chart.psi(pt);
    const double e2 = std::exp(2.0 * psi);
    const double em2 = std::exp(-2.0 * psi);
    const double emp = std::exp(-psi);
    const auto& du = f.du[node];

    f.psi[node] = psi;
    f.v[node] = nt.v;
    f.vtilde[node] = 1.0 / nt.v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        f.g[node][i][j] = e2 * (-du[i] * du[j] + sigma[i][j]);
        f.ginv[node][i][j] = em2 * (nt.u_up[i] * nt.u_up[j] / (nt.v * nt.v) + sinv[i][j]);
      }
    f.nu[node][0] = -emp / nt.v;
    for (int i = 0; i < n; ++i) f.nu[node][i + 1] = -emp * nt.u_up[i] / nt.v;
    ambient[node] = chart.christoffel(pt);
  }

  for (std::size_t node = 0; node < count; ++node) {
    // d_k g_ij of the assembled induced metric.
    std::array<Mat2, kMaxSpatial> dg{};
    for (int k = 0; k < n; ++k) {
      const Mat2& hi = f.g[grid.neighbor_along(node, k, 1)];
      const Mat2& lo = f.g[grid.neighbor_along(node, k, -1)];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dg[k][i][j] = (hi[i][j] - lo[i][j]) / (2.0 * grid.spacing()[k]);
    }
    const Mat2& ginv = f.ginv[node];
    const auto& du = f.du[node];

    // Covariant Hessian u_{;ij} = u_{,ij} - Gamma^k_ij u_k.
    Mat2 hess{};
    for (int i = 0; i < n; ++i) {
      const double hi2 = grid.spacing()[i] * grid.spacing()[i];
      hess[i][i] = (u[grid.neighbor_along(node, i, 1)] - 2.0 * u[node] + u[grid.neighbor_along(node, i, -1)]) / hi2;
    }
    if (n == 2) {
      const double cross = (u[grid.neighbor(node, 1, 1)] - u[grid.neighbor(node, 1, -1)] -
                            u[grid.neighbor(node, -1, 1)] + u[grid.neighbor(node, -1, -1)]) /
                           (4.0 * grid.spacing()[0] * grid.spacing()[1]);
      hess[0][1] = cross;
      hess[1][0] = cross;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double gamma_u = 0.0;
        for (int k = 0; k < n; ++k) {
          double gam = 0.0;
          for (int l = 0; l < n; ++l) gam += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
          gamma_u += 0.5 * gam * du[k];
        }
        hess[i][j] -= gamma_u;
      }

    const Christoffel& cb = ambient[node];
    const double scale = -std::exp(f.psi[node]) * f.v[node];
    Mat2 h{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        h[i][j] = scale * (hess[i][j] + cb[0][0][0] * du[i] * du[j] + cb[0][0][j + 1] * du[i] +
                           cb[0][0][i + 1] * du[j] + cb[0][i + 1][j + 1]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) {
        const double s = 0.5 * (h[i][j] + h[j][i]);
        h[i][j] = s;
        h[j][i] = s;
      }
    f.hij[node] = h;
  }

  f.H = mean_curvature(f);
  f.normA2 = second_fundamental_norm(f);
  return f;
}

std::vector<Mat2> second_fundamental_form(std::span<const double> u, const Grid& grid,
                                          const SpacetimeChart& chart, double eps_guard) {
  GraphState state(0.0, std::vector<double>(u.begin(), u.end()), grid, chart);
  return assemble_geometry(state, {eps_guard}).hij;
}

std::vector<double> mean_curvature(const GeometryFields& fields) {
  const int n = fields.n;
  std::vector<double> H(fields.hij.size());
  for (std::size_t node = 0; node < H.size(); ++node) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += fields.ginv[node][i][j] * fields.hij[node][i][j];
    H[node] = s;
  }
  return H;
}

std::vector<double> second_fundamental_norm(const GeometryFields& fields) {
  const int n = fields.n;
  std::vector<double> out(fields.hij.size());
  for (std::size_t node = 0; node < out.size(); ++node) {
    const Mat2& gi = fields.ginv[node];
    const Mat2& h = fields.hij[node];
    // h^i_j = g^ik h_kj, then ||A||^2 = h^i_j h^j_i.
    Mat2 mixed{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) mixed[i][j] += gi[i][k] * h[k][j];
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += mixed[i][j] * mixed[j][i];
    out[node] = s;
  }
  return out;
}

std::vector<Vec3> normal_vector(std::span<const double> u, const Grid& grid, const SpacetimeChart& chart,
                                double eps_guard) {
  const auto du = spatial_gradient(u, grid);
  std::vector<Vec3> nu(u.size(), Vec3{});
  for (std::size_t node = 0; node < u.size(); ++node) {
    const ChartPoint pt{u[node], grid.coordinates(node)};
    const NodeTilt nt = node_tilt(du[node], chart.spatial_metric(pt), grid.n(), eps_guard, node);
    const double emp = std::exp(-chart.psi(pt));
    nu[node][0] = -emp / nt.v;
    for (int i = 0; i < grid.n(); ++i) nu[node][i + 1] = -emp * nt.u_up[i] / nt.v;
  }
  return nu;
}

}  // namespace pmcf
