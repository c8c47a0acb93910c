#include "pmcf/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "pmcf/errors.hpp"

namespace pmcf {

namespace detail {

class ChartModel {
 public:
  explicit ChartModel(int n) : n_(n) {}
  virtual ~ChartModel() = default;

  virtual ChartFamily family() const = 0;
  virtual const std::string& scale_name() const {
    static const std::string empty;
    return empty;
  }
  virtual ConformalFactor conformal(const ChartPoint& pt) const = 0;
  virtual double psi(const ChartPoint& pt) const { return conformal(pt).value; }
  virtual Mat2 sigma(const ChartPoint& pt) const = 0;
  virtual Mat2 sigma_dot(const ChartPoint& pt) const = 0;
  virtual Christoffel christoffel(const ChartPoint& pt) const = 0;
  virtual ChristoffelGradient christoffel_gradient(const ChartPoint& pt) const = 0;
  virtual Riemann riemann(const ChartPoint& pt) const = 0;
  virtual Mat3 ricci(const ChartPoint& pt) const = 0;

  Mat3 metric(const ChartPoint& pt) const {
    const double e2psi = std::exp(2.0 * psi(pt));
    const Mat2 s = sigma(pt);
    Mat3 g{};
    g[0][0] = -e2psi;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) g[i + 1][j + 1] = e2psi * s[i][j];
    return g;
  }

  Mat3 inverse_metric(const ChartPoint& pt) const {
    const double em2psi = std::exp(-2.0 * psi(pt));
    Mat2 sinv;
    if (!invert(sigma(pt), n_, sinv)) throw DomainError("spatial metric is singular");
    Mat3 g{};
    g[0][0] = -em2psi;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) g[i + 1][j + 1] = em2psi * sinv[i][j];
    return g;
  }

 protected:
  int n_;
};

namespace {

class MinkowskiModel final : public ChartModel {
 public:
  using ChartModel::ChartModel;
  ChartFamily family() const override { return ChartFamily::MinkowskiTorus; }
  ConformalFactor conformal(const ChartPoint&) const override { return {}; }
  Mat2 sigma(const ChartPoint&) const override { return identity2(n_); }
  Mat2 sigma_dot(const ChartPoint&) const override { return Mat2{}; }
  Christoffel christoffel(const ChartPoint&) const override { return Christoffel{}; }
  ChristoffelGradient christoffel_gradient(const ChartPoint&) const override { return {}; }
  Riemann riemann(const ChartPoint&) const override { return Riemann{}; }
  Mat3 ricci(const ChartPoint&) const override { return Mat3{}; }
};

class RobertsonWalkerModel final : public ChartModel {
 public:
  RobertsonWalkerModel(int n, ScaleFactor a) : ChartModel(n), a_(std::move(a)) {}

  ChartFamily family() const override { return ChartFamily::RobertsonWalker; }
  const std::string& scale_name() const override { return a_.name; }
  ConformalFactor conformal(const ChartPoint&) const override { return {}; }

  Mat2 sigma(const ChartPoint& pt) const override {
    const double a = scale(pt.x0);
    Mat2 s{};
    for (int i = 0; i < n_; ++i) s[i][i] = a * a;
    return s;
  }

  Mat2 sigma_dot(const ChartPoint& pt) const override {
    const double a = scale(pt.x0);
    Mat2 s{};
    for (int i = 0; i < n_; ++i) s[i][i] = 2.0 * a * a_.a_dot(pt.x0);
    return s;
  }

  // G^0_ij = a a' delta_ij, G^i_0j = G^i_j0 = (a'/a) delta^i_j.
  Christoffel christoffel(const ChartPoint& pt) const override {
    const double a = scale(pt.x0);
    const double ad = a_.a_dot(pt.x0);
    Christoffel c{};
    for (int i = 1; i <= n_; ++i) {
      c[0][i][i] = a * ad;
      c[i][0][i] = ad / a;
      c[i][i][0] = ad / a;
    }
    return c;
  }

  ChristoffelGradient christoffel_gradient(const ChartPoint& pt) const override {
    const double a = scale(pt.x0);
    const double ad = a_.a_dot(pt.x0);
    const double add = a_.a_ddot(pt.x0);
    ChristoffelGradient d{};
    for (int i = 1; i <= n_; ++i) {
      d[0][0][i][i] = ad * ad + a * add;
      d[0][i][0][i] = add / a - (ad * ad) / (a * a);
      d[0][i][i][0] = d[0][i][0][i];
    }
    return d;
  }

  // R_0i0j = -a a'' delta_ij, R_ijkl = a^2 a'^2 (delta_ik delta_jl - delta_il delta_jk).
  Riemann riemann(const ChartPoint& pt) const override {
    const double a = scale(pt.x0);
    const double ad = a_.a_dot(pt.x0);
    const double add = a_.a_ddot(pt.x0);
    Riemann r{};
    for (int i = 1; i <= n_; ++i) {
      r[0][i][0][i] = -a * add;
      r[i][0][i][0] = -a * add;
      r[0][i][i][0] = a * add;
      r[i][0][0][i] = a * add;
    }
    const double k = a * a * ad * ad;
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j) {
        if (i == j) continue;
        r[i][j][i][j] = k;
        r[i][j][j][i] = -k;
      }
    return r;
  }

  // Ric_00 = -n a''/a, Ric_ij = (a a'' + (n - 1) a'^2) delta_ij.
  Mat3 ricci(const ChartPoint& pt) const override {
    const double a = scale(pt.x0);
    const double ad = a_.a_dot(pt.x0);
    const double add = a_.a_ddot(pt.x0);
    Mat3 ric{};
    ric[0][0] = -n_ * add / a;
    for (int i = 1; i <= n_; ++i) ric[i][i] = a * add + (n_ - 1) * ad * ad;
    return ric;
  }

 private:
  double scale(double x0) const {
    const double a = a_.a(x0);
    if (!(a > 0.0) || !std::isfinite(a))
      throw DomainError("scale factor a(" + std::to_string(x0) + ") is not positive");
    return a;
  }

  ScaleFactor a_;
};

class CustomModel final : public ChartModel {
 public:
  CustomModel(int n, CustomMetric m) : ChartModel(n), m_(std::move(m)) {}

  ChartFamily family() const override { return ChartFamily::Custom; }
  double psi(const ChartPoint& pt) const override { return m_.psi(pt.x0, pt.x); }

  ConformalFactor conformal(const ChartPoint& pt) const override {
    ConformalFactor cf;
    cf.value = m_.psi(pt.x0, pt.x);
    const int dim = n_ + 1;
    const double s = m_.fd_step;
    for (int mu = 0; mu < dim; ++mu)
      cf.grad[mu] = (m_.psi(shift(pt, mu, s).x0, shift(pt, mu, s).x) -
                     m_.psi(shift(pt, mu, -s).x0, shift(pt, mu, -s).x)) /
                    (2.0 * s);
    const double q = m_.curvature_step;
    for (int mu = 0; mu < dim; ++mu)
      for (int nu = mu; nu < dim; ++nu) {
        auto at = [&](double a, double b) {
          const ChartPoint p = shift(shift(pt, mu, a), nu, b);
          return m_.psi(p.x0, p.x);
        };
        const double h = (at(q, q) - at(q, -q) - at(-q, q) + at(-q, -q)) / (4.0 * q * q);
        cf.hess[mu][nu] = h;
        cf.hess[nu][mu] = h;
      }
    return cf;
  }

  Mat2 sigma(const ChartPoint& pt) const override {
    const Mat2 s = m_.sigma(pt.x0, pt.x);
    if (!positive_definite(s, n_)) throw DomainError("custom spatial metric is not positive definite");
    return s;
  }

  Mat2 sigma_dot(const ChartPoint& pt) const override {
    const double s = m_.fd_step;
    const Mat2 hi = m_.sigma(pt.x0 + s, pt.x);
    const Mat2 lo = m_.sigma(pt.x0 - s, pt.x);
    Mat2 d{};
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) d[i][j] = (hi[i][j] - lo[i][j]) / (2.0 * s);
    return d;
  }

  Christoffel christoffel(const ChartPoint& pt) const override {
    return christoffel_with_step(pt, m_.fd_step);
  }

  Christoffel christoffel_with_step(const ChartPoint& pt, double s) const {
    const int dim = n_ + 1;
    std::array<Mat3, kMaxAmbient> dg{};
    for (int mu = 0; mu < dim; ++mu) {
      const Mat3 hi = metric(shift(pt, mu, s));
      const Mat3 lo = metric(shift(pt, mu, -s));
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) dg[mu][a][b] = (hi[a][b] - lo[a][b]) / (2.0 * s);
    }
    const Mat3 ginv = inverse_metric(pt);
    Christoffel c{};
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        for (int g = b; g < dim; ++g) {
          double sum = 0.0;
          for (int d = 0; d < dim; ++d) sum += ginv[a][d] * (dg[g][d][b] + dg[b][d][g] - dg[d][b][g]);
          c[a][b][g] = 0.5 * sum;
          c[a][g][b] = 0.5 * sum;
        }
    return c;
  }

  ChristoffelGradient christoffel_gradient(const ChartPoint& pt) const override {
    const int dim = n_ + 1;
    const double q = m_.curvature_step;
    ChristoffelGradient d{};
    for (int mu = 0; mu < dim; ++mu) {
      const Christoffel hi = christoffel(shift(pt, mu, q));
      const Christoffel lo = christoffel(shift(pt, mu, -q));
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          for (int g = 0; g < dim; ++g) d[mu][a][b][g] = (hi[a][b][g] - lo[a][b][g]) / (2.0 * q);
    }
    return d;
  }

  Riemann riemann(const ChartPoint& pt) const override {
    return riemann_from_connection(christoffel(pt), christoffel_gradient(pt), metric(pt), n_ + 1);
  }

  Mat3 ricci(const ChartPoint& pt) const override {
    return ricci_from_riemann(riemann(pt), inverse_metric(pt), n_ + 1);
  }

 private:
  static ChartPoint shift(ChartPoint pt, int mu, double s) {
    if (mu == 0)
      pt.x0 += s;
    else
      pt.x[mu - 1] += s;
    return pt;
  }

  CustomMetric m_;
};

}  // namespace
}  // namespace detail

ScaleFactor ScaleFactor::exp_decay() {
  return {"exp(-t)", [](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); },
          [](double t) { return std::exp(-t); }};
}

ScaleFactor ScaleFactor::crossing(int n) {
  const double k = 1.0 / n;
  return {"crossing", [k](double t) { return std::exp(-0.5 * k * t * t); },
          [k](double t) { return -k * t * std::exp(-0.5 * k * t * t); },
          [k](double t) { return (k * k * t * t - k) * std::exp(-0.5 * k * t * t); }};
}

ScaleFactor ScaleFactor::constant() {
  return {"const", [](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

ScaleFactor ScaleFactor::preset(std::string_view name, int n) {
  if (name == "exp(-t)") return exp_decay();
  if (name == "crossing") return crossing(n);
  if (name == "const") return constant();
  throw ConfigError("a", 0, "unknown scale factor preset '" + std::string(name) + "'");
}

std::string_view to_string(ChartFamily family) {
  switch (family) {
    case ChartFamily::MinkowskiTorus:
      return "minkowski";
    case ChartFamily::RobertsonWalker:
      return "robertson-walker";
    case ChartFamily::Custom:
      return "custom";
  }
  return "unknown";
}

namespace {

void check_dimension(int n, const Vec2& periods) {
  if (n < 1 || n > kMaxSpatial) throw std::invalid_argument("spatial dimension must be 1 or 2");
  for (int i = 0; i < n; ++i)
    if (!(periods[i] > 0.0) || !std::isfinite(periods[i]))
      throw std::invalid_argument("torus periods must be positive");
}

}  // namespace

SpacetimeChart::SpacetimeChart(int n, Vec2 periods, std::shared_ptr<const detail::ChartModel> model)
    : n_(n), periods_(periods), model_(std::move(model)) {}

SpacetimeChart SpacetimeChart::minkowski(int n, Vec2 periods) {
  check_dimension(n, periods);
  return SpacetimeChart(n, periods, std::make_shared<detail::MinkowskiModel>(n));
}

SpacetimeChart SpacetimeChart::robertson_walker(int n, ScaleFactor a, Vec2 periods) {
  check_dimension(n, periods);
  if (!a.a || !a.a_dot || !a.a_ddot) throw std::invalid_argument("scale factor callables are empty");
  return SpacetimeChart(n, periods, std::make_shared<detail::RobertsonWalkerModel>(n, std::move(a)));
}

SpacetimeChart SpacetimeChart::custom(int n, CustomMetric metric, Vec2 periods) {
  check_dimension(n, periods);
  if (!metric.psi || !metric.sigma) throw std::invalid_argument("custom metric callables are empty");
  if (!(metric.fd_step > 0.0) || !(metric.curvature_step > 0.0))
    throw std::invalid_argument("custom metric difference steps must be positive");
  return SpacetimeChart(n, periods, std::make_shared<detail::CustomModel>(n, std::move(metric)));
}

ChartFamily SpacetimeChart::family() const { return model_->family(); }
const std::string& SpacetimeChart::scale_name() const { return model_->scale_name(); }

ChartPoint SpacetimeChart::reduce(ChartPoint pt) const {
  for (int i = 0; i < n_; ++i) {
    double r = std::fmod(pt.x[i], periods_[i]);
    if (r < 0.0) r += periods_[i];
    if (r >= periods_[i]) r = 0.0;
    pt.x[i] = r;
  }
  for (int i = n_; i < kMaxSpatial; ++i) pt.x[i] = 0.0;
  return pt;
}

ConformalFactor SpacetimeChart::conformal_factor(const ChartPoint& pt) const {
  return model_->conformal(reduce(pt));
}
double SpacetimeChart::psi(const ChartPoint& pt) const { return model_->psi(reduce(pt)); }
Mat2 SpacetimeChart::spatial_metric(const ChartPoint& pt) const { return model_->sigma(reduce(pt)); }
Mat2 SpacetimeChart::spatial_metric_dot(const ChartPoint& pt) const {
  return model_->sigma_dot(reduce(pt));
}
Mat3 SpacetimeChart::metric(const ChartPoint& pt) const { return model_->metric(reduce(pt)); }
Mat3 SpacetimeChart::inverse_metric(const ChartPoint& pt) const {
  return model_->inverse_metric(reduce(pt));
}
Christoffel SpacetimeChart::christoffel(const ChartPoint& pt) const {
  const ChartPoint r = reduce(pt);
  model_->sigma(r);  // domain check
  return model_->christoffel(r);
}
ChristoffelGradient SpacetimeChart::christoffel_gradient(const ChartPoint& pt) const {
  return model_->christoffel_gradient(reduce(pt));
}
Riemann SpacetimeChart::riemann(const ChartPoint& pt) const { return model_->riemann(reduce(pt)); }
Mat3 SpacetimeChart::ricci(const ChartPoint& pt) const { return model_->ricci(reduce(pt)); }

Christoffel christoffel_bar(const SpacetimeChart& chart, const ChartPoint& pt) {
  return chart.christoffel(pt);
}

Mat2 slice_second_fundamental_form(const SpacetimeChart& chart, const ChartPoint& pt) {
  const int n = chart.n();
  const ConformalFactor psi = chart.conformal_factor(pt);
  const Mat2 s = chart.spatial_metric(pt);
  const Mat2 sd = chart.spatial_metric_dot(pt);
  const double epsi = std::exp(psi.value);
  Mat2 h{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h[i][j] = epsi * (-0.5 * sd[i][j] - psi.grad[0] * s[i][j]);
  return h;
}

double slice_mean_curvature(const SpacetimeChart& chart, const ChartPoint& pt) {
  const int n = chart.n();
  const Mat2 h = slice_second_fundamental_form(chart, pt);
  Mat2 sinv;
  if (!invert(chart.spatial_metric(pt), n, sinv)) throw DomainError("spatial metric is singular");
  double tr = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tr += sinv[i][j] * h[i][j];
  return std::exp(-2.0 * chart.conformal_factor(pt).value) * tr;
}

double ricci_timelike(const SpacetimeChart& chart, const ChartPoint& pt, const Vec3& nu) {
  const int dim = chart.ambient_dim();
  const double norm = inner(chart.metric(pt), nu, nu, dim);
  if (std::abs(norm + 1.0) > 1e-10)
    throw std::invalid_argument("ricci_timelike: nu is not a unit timelike vector (<nu,nu> = " +
                                std::to_string(norm) + ")");
  return inner(chart.ricci(pt), nu, nu, dim);
}

Riemann riemann_from_connection(const Christoffel& gamma, const ChristoffelGradient& dgamma,
                                const Mat3& metric, int dim) {
  Riemann up{};
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          double s = dgamma[c][a][b][d] - dgamma[d][a][b][c];
          for (int e = 0; e < dim; ++e) s += gamma[a][c][e] * gamma[e][b][d] - gamma[a][d][e] * gamma[e][b][c];
          up[a][b][c][d] = s;
        }
  Riemann low{};
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          double s = 0.0;
          for (int e = 0; e < dim; ++e) s += metric[a][e] * up[e][b][c][d];
          low[a][b][c][d] = s;
        }
  return low;
}

Mat3 ricci_from_riemann(const Riemann& riemann, const Mat3& inverse_metric, int dim) {
  Mat3 ric{};
  for (int b = 0; b < dim; ++b)
    for (int d = 0; d < dim; ++d) {
      double s = 0.0;
      for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c) s += inverse_metric[a][c] * riemann[a][b][c][d];
      ric[b][d] = s;
    }
  return ric;
}

namespace {

// Radical inverse of k in the given base; nested prefixes fill [0, 1) densely.
double radical_inverse(unsigned k, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (k > 0) {
    r += f * (k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

ChartPoint lambda_lattice_point(const SpacetimeChart& chart, const LambdaRegion& region, int k) {
  ChartPoint pt;
  const double span = region.x0_max - region.x0_min;
  if (k == 0)
    pt.x0 = region.x0_min;
  else if (k == 1)
    pt.x0 = region.x0_max;
  else
    pt.x0 = region.x0_min + span * radical_inverse(static_cast<unsigned>(k - 1), 2);
  static constexpr unsigned kBases[kMaxSpatial] = {3, 5};
  for (int i = 0; i < chart.n(); ++i)
    pt.x[i] = chart.periods()[i] * radical_inverse(static_cast<unsigned>(k), kBases[i]);
  return pt;
}

double lambda_bound(const SpacetimeChart& chart, const LambdaRegion& region, int samples,
                    const LambdaOptions& options) {
  if (samples < 1) throw std::invalid_argument("lambda_bound: samples must be >= 1");
  if (!std::isfinite(region.x0_min) || !std::isfinite(region.x0_max) || region.x0_min > region.x0_max)
    throw std::invalid_argument("lambda_bound: empty x0 region");
  if (options.rapidities.empty()) throw std::invalid_argument("lambda_bound: no rapidities");

  const int n = chart.n();
  double min_ric = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const ChartPoint pt = lambda_lattice_point(chart, region, k);
    const double epsi = std::exp(-chart.conformal_factor(pt).value);
    const Mat2 s = chart.spatial_metric(pt);
    for (double r : options.rapidities) {
      const int axes = r == 0.0 ? 1 : n;
      for (int i = 0; i < axes; ++i)
        for (double sign : {1.0, -1.0}) {
          if (r == 0.0 && sign < 0.0) continue;
          Vec3 nu{};
          nu[0] = epsi * std::cosh(r);
          if (r != 0.0) nu[i + 1] = sign * epsi * std::sinh(r) / std::sqrt(s[i][i]);
          min_ric = std::min(min_ric, ricci_timelike(chart, pt, nu));
        }
    }
  }
  return std::max(0.0, -min_ric);
}

}  // namespace pmcf
