#include "pmcf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pmcf {

LambdaRegion visited_region(std::span<const MonitorRecord> monitors) {
  if (monitors.empty()) throw std::invalid_argument("visited_region: empty monitor series");
  LambdaRegion region{monitors.front().inf_u, monitors.front().sup_u};
  for (const auto& r : monitors) {
    region.x0_min = std::min(region.x0_min, r.inf_u);
    region.x0_max = std::max(region.x0_max, r.sup_u);
  }
  return region;
}

void annotate_bounds(std::vector<MonitorRecord>& monitors, double lambda, double p) {
  if (monitors.empty()) return;
  const double t0 = monitors.front().t;
  const double sup0 = monitors.front().sup_H;
  for (auto& r : monitors) {
    if (p < 1.0) {
      r.bound44_lhs = std::pow(std::max(r.sup_H, 0.0), 1.0 - p);
      r.bound44_rhs = std::pow(std::max(sup0, 0.0), 1.0 - p) + (1.0 - p) * lambda * (r.t - t0);
    } else {
      r.bound45_lhs = r.sup_H;
      r.bound45_rhs = sup0 * std::exp(lambda * (r.t - t0));
    }
  }
}

bool BoundsReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.passed; });
}

std::string BoundsReport::failure() const {
  for (const auto& c : checks)
    if (!c.passed) {
      std::ostringstream msg;
      msg << c.name << " violated at t = " << c.worst_time << " by " << c.worst_violation << " (tol " << tol
          << ")";
      return msg.str();
    }
  return {};
}

namespace {

struct Tracker {
  BoundCheck check;
  bool seen = false;

  void observe(double violation, double t) {
    if (!seen || violation > check.worst_violation) {
      check.worst_violation = violation;
      check.worst_time = t;
      seen = true;
    }
  }

  BoundCheck finish(double tol, double scale) {
    check.passed = !seen || check.worst_violation <= tol;
    check.measured_constant = seen && check.worst_violation > 0.0 ? check.worst_violation / scale : 0.0;
    return check;
  }
};

}  // namespace

BoundsReport check_bounds(std::span<const MonitorRecord> monitors, double lambda, double p, double tau,
                          double h, double tol_constant) {
  if (monitors.empty()) throw std::invalid_argument("check_bounds: empty monitor series");
  BoundsReport report;
  report.lambda = lambda;
  report.p = p;
  report.tau = tau;
  report.h = h;
  report.tol_constant = tol_constant;
  for (const auto& r : monitors) report.dt = std::max(report.dt, r.dt_used);
  const double scale = h * h + report.dt;
  report.tol = tol_constant * scale;

  const MonitorRecord& first = monitors.front();
  Tracker power{{"(a) sup-H power bound"}};
  Tracker expo{{"(b) sup-H exponential bound"}};
  Tracker preserve{{"(c) H^p >= tau"}};
  Tracker mono{{"(d) inf u nonincreasing"}};
  power.check.applicable = p < 1.0;
  expo.check.applicable = p == 1.0;

  for (std::size_t k = 0; k < monitors.size(); ++k) {
    const MonitorRecord& r = monitors[k];
    const double elapsed = r.t - first.t;
    if (p < 1.0) {
      const double lhs = std::pow(std::max(r.sup_H, 0.0), 1.0 - p);
      const double rhs = std::pow(std::max(first.sup_H, 0.0), 1.0 - p) + (1.0 - p) * lambda * elapsed;
      power.observe(lhs - rhs, r.t);
    } else {
      expo.observe(r.sup_H - first.sup_H * std::exp(lambda * elapsed), r.t);
    }
    preserve.observe(-r.min_HpMinusTau, r.t);
    if (k > 0) mono.observe(r.inf_u - monitors[k - 1].inf_u, r.t);
  }
  report.checks.push_back(power.finish(report.tol, scale));
  report.checks.push_back(expo.finish(report.tol, scale));
  report.checks.push_back(preserve.finish(report.tol, scale));
  report.checks.push_back(mono.finish(report.tol, scale));
  return report;
}

void require_bounds(const BoundsReport& report) {
  if (!report.passed()) throw BoundViolation(report.failure());
}

}  // namespace pmcf
