#include "pmcf/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pmcf/errors.hpp"

namespace pmcf {

namespace {

constexpr int kDim = 2;

ChartPoint chart_point(const SpacetimeChart& chart, const Vec3& x) {
  return chart.reduce(ChartPoint{x[0], {x[1], 0.0}});
}

// H^p and p H^{p-1}, exact for p = 1 so that H may change sign there.
struct Power {
  double hp;
  double dhp;
};

Power power_of(double H, double p, std::size_t k) {
  if (p == 1.0) return {H, 1.0};
  const double hp = curvature_power(H, p, k);
  return {hp, p * hp / H};
}

struct CurveOps {
  const std::vector<double>& g11;
  double dxi;

  double d1(const std::vector<double>& f, std::size_t k) const {
    const std::size_t n = f.size();
    return (f[(k + 1) % n] - f[(k + n - 1) % n]) / (2.0 * dxi);
  }
  double d2(const std::vector<double>& f, std::size_t k) const {
    const std::size_t n = f.size();
    return (f[(k + 1) % n] - 2.0 * f[k] + f[(k + n - 1) % n]) / (dxi * dxi);
  }
  double grad2(const std::vector<double>& f, std::size_t k) const {
    const double df = d1(f, k);
    return df * df / g11[k];
  }
  double laplacian(const std::vector<double>& f, std::size_t k) const {
    const double gamma = 0.5 * d1(g11, k) / g11[k];
    return (d2(f, k) - gamma * d1(f, k)) / g11[k];
  }
};

// Covariant derivatives of eta = -e^psi dx^0: eta2[a][b] = (nabla_b eta)_a and
// eta3[a][b][c] = (nabla_c nabla_b eta)_a.
struct EtaDerivatives {
  Mat3 eta2{};
  std::array<Mat3, kMaxAmbient> eta3{};
};

EtaDerivatives eta_derivatives(const SpacetimeChart& chart, const ChartPoint& pt) {
  const ConformalFactor cf = chart.conformal_factor(pt);
  const Christoffel gamma = chart.christoffel(pt);
  const ChristoffelGradient dgamma = chart.christoffel_gradient(pt);
  const double e = std::exp(cf.value);

  Vec3 eta{};
  eta[0] = -e;
  Mat3 d_eta{};
  std::array<Mat3, kMaxAmbient> dd_eta{};
  for (int b = 0; b < kDim; ++b) {
    d_eta[0][b] = -e * cf.grad[b];
    for (int c = 0; c < kDim; ++c) dd_eta[0][b][c] = -e * (cf.grad[c] * cf.grad[b] + cf.hess[b][c]);
  }

  EtaDerivatives out;
  std::array<Mat3, kMaxAmbient> d_eta2{};
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      double s = d_eta[a][b];
      for (int l = 0; l < kDim; ++l) s -= gamma[l][a][b] * eta[l];
      out.eta2[a][b] = s;
      for (int c = 0; c < kDim; ++c) {
        double ds = dd_eta[a][b][c];
        for (int l = 0; l < kDim; ++l) ds -= dgamma[c][l][a][b] * eta[l] + gamma[l][a][b] * d_eta[l][c];
        d_eta2[a][b][c] = ds;
      }
    }
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c) {
        double s = d_eta2[a][b][c];
        for (int l = 0; l < kDim; ++l) s -= gamma[l][a][c] * out.eta2[l][b] + gamma[l][b][c] * out.eta2[a][l];
        out.eta3[a][b][c] = s;
      }
  return out;
}

double bilinear(const Mat3& m, const Vec3& a, const Vec3& b) {
  double s = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) s += m[i][j] * a[i] * b[j];
  return s;
}

}  // namespace

ParametricState::ParametricState(double t_, std::vector<Vec3> x_, SpacetimeChart chart_)
    : t(t_), x(std::move(x_)), chart(std::move(chart_)) {
  if (chart.n() != 1) throw std::invalid_argument("ParametricState: parametric curves need a chart with n = 1");
  if (x.size() < 8) throw std::invalid_argument("ParametricState: need at least 8 samples");
}

double ParametricState::dxi() const { return kTwoPi / static_cast<double>(x.size()); }

Vec3 ParametricState::at(std::size_t k, int offset) const {
  const auto n = static_cast<long>(x.size());
  long idx = static_cast<long>(k) + offset;
  double shift = 0.0;
  while (idx < 0) {
    idx += n;
    shift -= chart.periods()[0];
  }
  while (idx >= n) {
    idx -= n;
    shift += chart.periods()[0];
  }
  Vec3 p = x[static_cast<std::size_t>(idx)];
  p[1] += shift;
  return p;
}

CurveGeometry curve_geometry(const ParametricState& state) {
  const std::size_t n = state.size();
  const double dxi = state.dxi();
  CurveGeometry out;
  out.tangent.resize(n);
  out.g11.resize(n);
  out.nu.resize(n);
  out.h11.resize(n);
  out.H.resize(n);
  out.normA2.resize(n);
  out.vtilde.resize(n);

  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 xm = state.at(k, -1);
    const Vec3 x0 = state.at(k, 0);
    const Vec3 xp = state.at(k, 1);
    const ChartPoint pt = chart_point(state.chart, x0);
    const Mat3 G = state.chart.metric(pt);
    const Christoffel gamma = state.chart.christoffel(pt);

    Vec3 e{}, acc{};
    for (int a = 0; a < kDim; ++a) {
      e[a] = (xp[a] - xm[a]) / (2.0 * dxi);
      acc[a] = (xp[a] - 2.0 * x0[a] + xm[a]) / (dxi * dxi);
    }
    for (int a = 0; a < kDim; ++a)
      for (int b = 0; b < kDim; ++b)
        for (int c = 0; c < kDim; ++c) acc[a] += gamma[a][b][c] * e[b] * e[c];

    const double g = inner(G, e, e, kDim);
    if (!(g > 0.0)) {
      std::ostringstream msg;
      msg << "curve tangent is not spacelike at sample " << k << " (<x', x'> = " << g << ")";
      throw SpacelikeViolation(msg.str(), k);
    }
    const Vec3 el = lower(G, e, kDim);
    Vec3 w{el[1], -el[0], 0.0};
    const double ww = inner(G, w, w, kDim);
    const double scale = (w[0] > 0.0 ? -1.0 : 1.0) / std::sqrt(-ww);
    for (double& c : w) c *= scale;

    out.tangent[k] = e;
    out.g11[k] = g;
    out.nu[k] = w;
    out.h11[k] = -inner(G, acc, w, kDim);
    out.H[k] = out.h11[k] / g;
    out.normA2[k] = out.H[k] * out.H[k];
    out.vtilde[k] = -std::exp(state.chart.psi(pt)) * w[0];
  }
  return out;
}

namespace {

std::vector<Vec3> velocity(const ParametricState& state, const CurveGeometry& geo, double p, double tau) {
  std::vector<Vec3> out(state.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double speed = power_of(geo.H[k], p, k).hp - tau;
    for (int a = 0; a < kDim; ++a) out[k][a] = speed * geo.nu[k][a];
  }
  return out;
}

}  // namespace

ParametricState flow_step_lagrangian(const ParametricState& state, double dt, double p, double tau,
                                     Integrator integrator) {
  const std::vector<Vec3> k1 = velocity(state, curve_geometry(state), p, tau);
  std::vector<Vec3> x = state.x;
  for (std::size_t k = 0; k < x.size(); ++k)
    for (int a = 0; a < kDim; ++a) x[k][a] += dt * k1[k][a];
  if (integrator == Integrator::RK2) {
    const ParametricState predictor(state.t + dt, x, state.chart);
    const std::vector<Vec3> k2 = velocity(predictor, curve_geometry(predictor), p, tau);
    x = state.x;
    for (std::size_t k = 0; k < x.size(); ++k)
      for (int a = 0; a < kDim; ++a) x[k][a] += 0.5 * dt * (k1[k][a] + k2[k][a]);
  }
  return ParametricState(state.t + dt, std::move(x), state.chart);
}

ParametricState sinusoid_curve(const SpacetimeChart& chart, double amplitude, int samples) {
  if (samples < 8) throw std::invalid_argument("sinusoid_curve: need at least 8 samples");
  std::vector<Vec3> x(static_cast<std::size_t>(samples));
  const double stretch = chart.periods()[0] / kTwoPi;
  for (int k = 0; k < samples; ++k) {
    const double xi = kTwoPi * k / samples;
    x[static_cast<std::size_t>(k)] = {amplitude * std::sin(xi), stretch * xi, 0.0};
  }
  return ParametricState(0.0, std::move(x), chart);
}

std::string_view to_string(Identity identity) {
  switch (identity) {
    case Identity::MetricEvolution:
      return "metric_evolution";
    case Identity::HEvolution:
      return "H_evolution";
    case Identity::HpEvolution:
      return "Hp_evolution";
    case Identity::MixedHij:
      return "mixed_hij";
    case Identity::Tilt:
      return "tilt";
    case Identity::Codazzi:
      return "codazzi";
    case Identity::Gauss:
      return "gauss";
  }
  return "unknown";
}

const std::vector<Identity>& all_identities() {
  static const std::vector<Identity> all{Identity::MetricEvolution, Identity::HEvolution, Identity::HpEvolution,
                                         Identity::MixedHij,        Identity::Tilt,       Identity::Codazzi,
                                         Identity::Gauss};
  return all;
}

std::optional<Identity> parse_identity(std::string_view name) {
  for (Identity id : all_identities())
    if (to_string(id) == name) return id;
  return std::nullopt;
}

std::string_view to_string(Fixture fixture) {
  return fixture == Fixture::MinkowskiSinusoid ? "minkowski" : "robertson-walker";
}

std::optional<Fixture> parse_fixture(std::string_view name) {
  if (name == "minkowski") return Fixture::MinkowskiSinusoid;
  if (name == "robertson-walker") return Fixture::RobertsonWalkerSinusoid;
  return std::nullopt;
}

FixtureSpec fixture_spec(Fixture fixture) {
  if (fixture == Fixture::MinkowskiSinusoid) return {SpacetimeChart::minkowski(1), 0.3, 1.0, 0.0};
  return {SpacetimeChart::robertson_walker(1, ScaleFactor::exp_decay()), 0.1, 0.5, 0.2};
}

double h_evolution_rhs(const CurvatureEvolutionInputs& in) {
  const Power pw = power_of(in.H, in.p, 0);
  double out = pw.dhp * in.lap_H - (pw.hp - in.tau) * (in.normA2 + in.ricci_nn);
  if (in.p != 1.0) out += in.p * (in.p - 1.0) * pw.hp / (in.H * in.H) * in.grad_H2;
  return out;
}

double hp_evolution_rhs(const CurvatureEvolutionInputs& in) {
  const Power pw = power_of(in.H, in.p, 0);
  return pw.dhp * in.lap_Hp - pw.dhp * (in.normA2 + in.ricci_nn) * (pw.hp - in.tau);
}

double identity_residual(Identity identity, Fixture fixture, double dt, int samples) {
  const FixtureSpec spec = fixture_spec(fixture);
  const ParametricState x0 = sinusoid_curve(spec.chart, spec.amplitude, samples);
  const CurveGeometry g0 = curve_geometry(x0);
  const std::size_t n = x0.size();
  const double p = spec.p;
  const double tau = spec.tau;
  const CurveOps ops{g0.g11, x0.dxi()};

  double worst = 0.0;
  auto record = [&](double lhs, double rhs) { worst = std::max(worst, std::abs(lhs - rhs)); };

  if (identity == Identity::Codazzi || identity == Identity::Gauss) {
    // With one tangent direction both structure equations reduce to curvature
    // contractions over an antisymmetric pair.
    for (std::size_t k = 0; k < n; ++k) {
      const ChartPoint pt = chart_point(x0.chart, x0.x[k]);
      const Riemann R = x0.chart.riemann(pt);
      const Vec3& e = g0.tangent[k];
      const double h = g0.h11[k];
      if (identity == Identity::Codazzi) {
        // h_{ij;k} - h_{ik;j} at i = j = k.
        const double h_1 = ops.d1(g0.h11, k) - ops.d1(g0.g11, k) / g0.g11[k] * h;
        record(h_1 - h_1, contract(R, g0.nu[k], e, e, e, kDim));
      } else {
        // A curve has no intrinsic curvature: R_1111 = 0.
        record(0.0, contract(R, e, e, e, e, kDim) - (h * h - h * h));
      }
    }
    return worst;
  }

  const ParametricState xp = flow_step_lagrangian(x0, dt, p, tau, Integrator::RK2);
  const ParametricState xm = flow_step_lagrangian(x0, -dt, p, tau, Integrator::RK2);
  const CurveGeometry gp = curve_geometry(xp);
  const CurveGeometry gm = curve_geometry(xm);
  auto ddt = [dt](const std::vector<double>& plus, const std::vector<double>& minus, std::size_t k) {
    return (plus[k] - minus[k]) / (2.0 * dt);
  };

  std::vector<double> hp0(n), hpp(n), hpm(n);
  for (std::size_t k = 0; k < n; ++k) {
    hp0[k] = power_of(g0.H[k], p, k).hp;
    hpp[k] = power_of(gp.H[k], p, k).hp;
    hpm[k] = power_of(gm.H[k], p, k).hp;
  }

  for (std::size_t k = 0; k < n; ++k) {
    const ChartPoint pt = chart_point(x0.chart, x0.x[k]);
    const Vec3& e = g0.tangent[k];
    const Vec3& nu = g0.nu[k];
    const double ginv = 1.0 / g0.g11[k];
    const double H = g0.H[k];
    const Power pw = power_of(H, p, k);
    const Mat3 ric = x0.chart.ricci(pt);
    const double ric_nn = bilinear(ric, nu, nu);

    CurvatureEvolutionInputs in;
    in.p = p;
    in.tau = tau;
    in.H = H;
    in.lap_H = ops.laplacian(g0.H, k);
    in.grad_H2 = ops.grad2(g0.H, k);
    in.lap_Hp = ops.laplacian(hp0, k);
    in.normA2 = g0.normA2[k];
    in.ricci_nn = ric_nn;

    switch (identity) {
      case Identity::MetricEvolution:
        record(ddt(gp.g11, gm.g11, k), 2.0 * (pw.hp - tau) * g0.h11[k]);
        break;
      case Identity::HEvolution:
        record(ddt(gp.H, gm.H, k), h_evolution_rhs(in));
        break;
      case Identity::HpEvolution:
        record(ddt(hpp, hpm, k), hp_evolution_rhs(in));
        break;
      case Identity::MixedHij: {
        // h_i^j with i = j = 1. Terms carrying the ambient curvature or its covariant
        // derivative with both tangent slots in one antisymmetric pair are zero here.
        const Riemann R = x0.chart.riemann(pt);
        const double h = g0.h11[k] * ginv;
        const double hup = g0.h11[k] * ginv * ginv;
        const double r_eeee = contract(R, e, e, e, e, kDim);
        const double r_nene = contract(R, nu, e, nu, e, kDim);
        double rhs = pw.dhp * in.lap_H - pw.dhp * (in.normA2 + ric_nn) * h + (p - 1.0) * pw.hp * h * h +
                     tau * h * h;
        if (p != 1.0) rhs += p * (p - 1.0) * pw.hp / (H * H) * in.grad_H2;
        rhs += 2.0 * pw.dhp * r_eeee * hup * ginv;
        rhs += tau * r_nene * ginv;
        rhs -= pw.dhp * ginv * r_eeee * (hup * g0.g11[k] * ginv + hup);
        rhs += (p - 1.0) * pw.hp * r_nene * ginv;
        record(ddt(gp.H, gm.H, k), rhs);
        break;
      }
      case Identity::Tilt: {
        const EtaDerivatives eta = eta_derivatives(x0.chart, pt);
        const double e_psi = std::exp(x0.chart.psi(pt));
        const double eta_e = -e_psi * e[0];
        const double hup = g0.h11[k] * ginv * ginv;
        double eta3_nee = 0.0;
        for (int a = 0; a < kDim; ++a)
          for (int b = 0; b < kDim; ++b)
            for (int c = 0; c < kDim; ++c) eta3_nee += eta.eta3[a][b][c] * nu[a] * e[b] * e[c];
        const double eta2_nn = bilinear(eta.eta2, nu, nu);
        const double lhs = ddt(gp.vtilde, gm.vtilde, k) - pw.dhp * ops.laplacian(g0.vtilde, k);
        const double rhs = -pw.dhp * g0.normA2[k] * g0.vtilde[k] -
                           2.0 * pw.dhp * hup * bilinear(eta.eta2, e, e) - pw.dhp * ginv * eta3_nee -
                           pw.dhp * bilinear(ric, nu, e) * eta_e * ginv - (p - 1.0) * pw.hp * eta2_nn -
                           tau * eta2_nn;
        record(lhs, rhs);
        break;
      }
      case Identity::Codazzi:
      case Identity::Gauss:
        break;
    }
  }
  return worst;
}

VerifyOptions VerifyOptions::with_levels(int levels) {
  if (levels < 3) throw std::invalid_argument("verify: need at least 3 refinement levels");
  VerifyOptions o;
  for (int k = 0; k < levels; ++k) {
    o.dts.push_back(0.2 / std::ldexp(1.0, k));
    o.samples.push_back(32 << k);
  }
  o.fine_samples = 1024;
  o.fine_dt = 2.5e-4;
  return o;
}

bool ResidualReport::meets_thresholds() const {
  if (exact) return true;
  return slope_dt && slope_h && *slope_dt >= kMinSlopeDt && *slope_h >= kMinSlopeH;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ResidualReport verify_identity(Identity identity, Fixture fixture, const VerifyOptions& options) {
  if (options.dts.size() < 3 || options.samples.size() < 3)
    throw std::invalid_argument("verify_identity: need at least 3 refinement levels");
  ResidualReport report;
  report.identity = identity;
  report.fixture = fixture;
  const double fine_h = kTwoPi / options.fine_samples;
  for (double dt : options.dts)
    report.dt_sweep.push_back({dt, fine_h, identity_residual(identity, fixture, dt, options.fine_samples)});
  for (int s : options.samples)
    report.h_sweep.push_back({options.fine_dt, kTwoPi / s, identity_residual(identity, fixture, options.fine_dt, s)});

  bool exact = true;
  for (const auto* sweep : {&report.dt_sweep, &report.h_sweep})
    for (const auto& row : *sweep) exact = exact && row.residual <= kExactResidual;
  report.exact = exact;
  if (!exact) {
    std::vector<double> x, y;
    for (const auto& row : report.dt_sweep) {
      x.push_back(row.dt);
      y.push_back(std::max(row.residual, std::numeric_limits<double>::min()));
    }
    report.slope_dt = loglog_slope(x, y);
    x.clear();
    y.clear();
    for (const auto& row : report.h_sweep) {
      x.push_back(row.h);
      y.push_back(std::max(row.residual, std::numeric_limits<double>::min()));
    }
    report.slope_h = loglog_slope(x, y);
  }
  return report;
}

}  // namespace pmcf
