#include "pmcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pmcf/errors.hpp"

namespace pmcf {

namespace {

constexpr double kMinTimeStep = 1e-14;

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

std::string_view to_string(Integrator integrator) {
  return integrator == Integrator::Euler ? "euler" : "rk2";
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::Stationary:
      return "Stationary";
    case Termination::TimeExhausted:
      return "TimeExhausted";
    case Termination::Aborted:
      return "Aborted";
  }
  return "Aborted";
}

void FlowConfig::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p", 0, "exponent must satisfy 0 < p <= 1");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("tau", 0, "regularizer must be >= 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ConfigError("cfl_safety", 0, "must lie in (0, 1]");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max", 0, "must be finite and >= 0");
  if (!(eps_stationary > 0.0)) throw ConfigError("eps_stationary", 0, "must be > 0");
  if (!(vtilde_max > 1.0)) throw ConfigError("vtilde_max", 0, "must be > 1");
  if (!(eps_guard > 0.0 && eps_guard < 1.0)) throw ConfigError("eps_guard", 0, "must lie in (0, 1)");
  if (monitor_stride < 1) throw ConfigError("output.stride", 0, "must be >= 1");
  if (snapshot_stride < 0) throw ConfigError("output.snapshot_stride", 0, "must be >= 0");
}

double curvature_power(double H, double p, std::size_t node) {
  if (p == 1.0) return H;
  if (!(H > 0.0)) {
    std::ostringstream msg;
    msg << "mean curvature H = " << H << " <= 0 at node " << node << " with fractional p = " << p;
    throw NonpositiveCurvature(msg.str(), node);
  }
  return std::pow(H, p);
}

std::vector<double> rhs(const GraphState& state, const GeometryFields& fields, const FlowConfig& config) {
  std::vector<double> out(state.u.size());
  for (std::size_t node = 0; node < out.size(); ++node) {
    const double speed = curvature_power(fields.H[node], config.p, node) - config.tau;
    out[node] = -std::exp(-fields.psi[node]) * fields.v[node] * speed;
  }
  return out;
}

std::vector<double> rhs(const GraphState& state, const FlowConfig& config) {
  return rhs(state, assemble_geometry(state, {config.eps_guard}), config);
}

double stable_dt(const GraphState& state, const GeometryFields& fields, const FlowConfig& config) {
  const int n = state.grid.n();
  double coeff = 0.0;
  for (std::size_t node = 0; node < fields.size(); ++node) {
    const double hp1 = config.p == 1.0 ? 1.0 : curvature_power(fields.H[node], config.p, node) / fields.H[node];
    const double c = config.p * hp1 * std::exp(-fields.psi[node]) * fields.v[node] *
                     max_eigenvalue(fields.ginv[node], n);
    coeff = std::max(coeff, c);
  }
  const double h = state.grid.min_spacing();
  const double dt = config.cfl_safety * h * h / coeff;
  if (!(dt >= kMinTimeStep)) {
    std::ostringstream msg;
    msg << "stable time step " << dt << " below " << kMinTimeStep << " (diffusion coefficient " << coeff << ")";
    throw StiffnessError(msg.str());
  }
  return std::min(dt, config.t_max - state.t);
}

double stable_dt(const GraphState& state, const FlowConfig& config) {
  return stable_dt(state, assemble_geometry(state, {config.eps_guard}), config);
}

namespace {

GraphState advance(const GraphState& state, const GeometryFields& fields, double dt, const FlowConfig& config) {
  const std::vector<double> k1 = rhs(state, fields, config);
  std::vector<double> u1(state.u.size());
  for (std::size_t i = 0; i < u1.size(); ++i) u1[i] = state.u[i] + dt * k1[i];
  if (config.integrator == Integrator::RK2) {
    const GraphState predictor(state.t + dt, u1, state.grid, state.chart);
    const std::vector<double> k2 = rhs(predictor, config);
    for (std::size_t i = 0; i < u1.size(); ++i) u1[i] = state.u[i] + 0.5 * dt * (k1[i] + k2[i]);
  }
  return GraphState(state.t + dt, std::move(u1), state.grid, state.chart);
}

}  // namespace

GraphState step(const GraphState& state, double dt, const FlowConfig& config) {
  const GeometryFields fields = assemble_geometry(state, {config.eps_guard});
  GraphState next = advance(state, fields, dt, config);
  tilt(next.u, next.grid, next.chart, config.eps_guard);
  return next;
}

MonitorRecord summarize(const GraphState& state, const GeometryFields& fields, const FlowConfig& config) {
  MonitorRecord r;
  r.t = state.t;
  const auto [umin, umax] = std::minmax_element(state.u.begin(), state.u.end());
  r.inf_u = *umin;
  r.sup_u = *umax;
  r.mean_u = std::accumulate(state.u.begin(), state.u.end(), 0.0) / static_cast<double>(state.u.size());
  const auto [hmin, hmax] = std::minmax_element(fields.H.begin(), fields.H.end());
  r.sup_H = *hmax;
  r.min_H = *hmin;
  r.min_HpMinusTau = std::numeric_limits<double>::infinity();
  r.max_abs_HpMinusTau = 0.0;
  for (std::size_t node = 0; node < fields.size(); ++node) {
    const double d = curvature_power(fields.H[node], config.p, node) - config.tau;
    r.min_HpMinusTau = std::min(r.min_HpMinusTau, d);
    r.max_abs_HpMinusTau = std::max(r.max_abs_HpMinusTau, std::abs(d));
  }
  r.max_vtilde = *std::max_element(fields.vtilde.begin(), fields.vtilde.end());
  r.max_normA = std::sqrt(*std::max_element(fields.normA2.begin(), fields.normA2.end()));
  return r;
}

void require_admissible(const GraphState& initial, const FlowConfig& config) {
  config.validate();
  GeometryFields fields;
  try {
    fields = assemble_geometry(initial, {config.eps_guard});
  } catch (const FlowError& e) {
    throw InadmissibleInitialData(std::string("initial data rejected: ") + e.what());
  }
  const double min_H = *std::min_element(fields.H.begin(), fields.H.end());
  if (config.p < 1.0 && !(min_H > 0.0)) {
    std::ostringstream msg;
    msg << "initial data rejected: min H = " << min_H << " is not positive with fractional p";
    throw InadmissibleInitialData(msg.str());
  }
  if (config.tau == 0.0 && !(min_H > 0.0)) {
    std::ostringstream msg;
    msg << "initial data rejected: tau = 0 requires min H > 0, got " << min_H;
    throw InadmissibleInitialData(msg.str());
  }
  const double min_hp = config.p == 1.0 ? min_H : std::pow(min_H, config.p);
  if (min_hp < config.tau) {
    std::ostringstream msg;
    msg << "initial data rejected: min H^p = " << min_hp << " < tau = " << config.tau;
    throw InadmissibleInitialData(msg.str());
  }
}

RunResult run(const GraphState& initial, const FlowConfig& config) {
  require_admissible(initial, config);

  RunResult result{Termination::Aborted, {}, {}, {}, initial, 0};
  GraphState state = initial;
  GeometryFields fields = assemble_geometry(state, {config.eps_guard});
  result.snapshots.push_back(state);
  const double t_end = config.t_max - 1e-12 * std::max(1.0, std::abs(config.t_max));

  std::size_t k = 0;
  while (true) {
    MonitorRecord rec = summarize(state, fields, config);
    rec.step = k;

    std::string stop;
    if (rec.max_abs_HpMinusTau < config.eps_stationary) {
      result.termination = Termination::Stationary;
    } else if (state.t >= t_end) {
      result.termination = Termination::TimeExhausted;
    } else if (rec.max_vtilde > config.vtilde_max) {
      result.termination = Termination::Aborted;
      std::ostringstream msg;
      msg << "tilt guard: max vtilde = " << rec.max_vtilde << " exceeds " << config.vtilde_max;
      stop = msg.str();
    } else {
      try {
        const double dt = stable_dt(state, fields, config);
        GraphState next = advance(state, fields, dt, config);
        GeometryFields next_fields = assemble_geometry(next, {config.eps_guard});
        rec.dt_used = dt;
        if (k % static_cast<std::size_t>(config.monitor_stride) == 0) result.monitors.push_back(rec);
        state = std::move(next);
        fields = std::move(next_fields);
        ++k;
        if (config.snapshot_stride > 0 && k % static_cast<std::size_t>(config.snapshot_stride) == 0)
          result.snapshots.push_back(state);
        continue;
      } catch (const FlowError& e) {
        result.termination = Termination::Aborted;
        stop = e.what();
      }
    }
    // Terminal record.
    result.abort_reason = stop;
    result.monitors.push_back(rec);
    break;
  }
  if (result.snapshots.size() == 1 || result.snapshots.back().t != state.t) result.snapshots.push_back(state);
  result.final_state = state;
  result.steps = k;
  return result;
}

SweepResult tau_sweep(const GraphState& initial, const FlowConfig& config, std::span<const double> taus) {
  SweepResult out;
  for (double tau : taus) {
    FlowConfig cfg = config;
    cfg.tau = tau;
    SweepEntry entry;
    entry.tau = tau;
    try {
      const RunResult r = run(initial, cfg);
      entry.termination = r.termination;
      entry.abort_reason = r.abort_reason;
      entry.t_final = r.final_state.t;
      entry.steps = r.steps;
      entry.limit = r.final_state.u;
      const GeometryFields f = assemble_geometry(r.final_state, {cfg.eps_guard});
      const double target = cfg.p == 1.0 ? tau : std::pow(tau, 1.0 / cfg.p);
      for (double H : f.H) {
        entry.sup_H_error = std::max(entry.sup_H_error, std::abs(H - target));
        entry.sup_abs_H = std::max(entry.sup_abs_H, std::abs(H));
      }
    } catch (const std::exception& e) {
      entry.termination = Termination::Aborted;
      entry.abort_reason = e.what();
    }
    const bool failed = entry.termination == Termination::Aborted;
    if (failed) out.error = "tau = " + std::to_string(tau) + ": " + entry.abort_reason;
    out.entries.push_back(std::move(entry));
    if (failed) break;
  }
  out.complete = out.entries.size() == taus.size() && out.error.empty();
  for (std::size_t i = 1; i < out.entries.size(); ++i)
    if (!out.entries[i].limit.empty() && !out.entries[i - 1].limit.empty())
      out.distances.push_back(max_abs_diff(out.entries[i].limit, out.entries[i - 1].limit));
  bool decreasing = true;
  for (std::size_t i = 1; i < out.distances.size(); ++i)
    decreasing = decreasing && out.distances[i] < out.distances[i - 1];
  bool stationary = true;
  for (const auto& e : out.entries) stationary = stationary && e.termination == Termination::Stationary;
  out.cauchy = out.complete && stationary && decreasing;
  return out;
}

}  // namespace pmcf
