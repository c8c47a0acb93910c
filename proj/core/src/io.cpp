#include "pmcf/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "json.hpp"

#ifndef PMCF_VERSION
#define PMCF_VERSION "0.0.0"
#endif

namespace pmcf {

using ordered_json = nlohmann::ordered_json;

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("error while writing '" + path.string() + "'");
}

ordered_json number_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json optional_number(const std::optional<double>& x) {
  return x ? number_or_null(*x) : ordered_json(nullptr);
}

ordered_json monitor_object(const MonitorRecord& r) {
  ordered_json j;
  j["step"] = r.step;
  j["t"] = r.t;
  j["inf_u"] = r.inf_u;
  j["sup_u"] = r.sup_u;
  j["mean_u"] = r.mean_u;
  j["sup_H"] = r.sup_H;
  j["min_H"] = r.min_H;
  j["min_HpMinusTau"] = r.min_HpMinusTau;
  j["max_abs_HpMinusTau"] = r.max_abs_HpMinusTau;
  j["max_vtilde"] = r.max_vtilde;
  j["max_normA"] = r.max_normA;
  j["bound44_lhs"] = number_or_null(r.bound44_lhs);
  j["bound44_rhs"] = number_or_null(r.bound44_rhs);
  j["bound45_lhs"] = number_or_null(r.bound45_lhs);
  j["bound45_rhs"] = number_or_null(r.bound45_rhs);
  j["dt_used"] = r.dt_used;
  return j;
}

ordered_json config_object(const RunConfig& c) {
  ordered_json j;
  j["family"] = std::string(to_string(c.family));
  if (!c.a_preset.empty()) j["a"] = c.a_preset;
  j["grid"]["n"] = c.n;
  j["grid"]["sizes"] = ordered_json::array();
  j["grid"]["periods"] = ordered_json::array();
  for (int a = 0; a < c.n; ++a) {
    j["grid"]["sizes"].push_back(c.sizes[static_cast<std::size_t>(a)]);
    j["grid"]["periods"].push_back(c.periods[static_cast<std::size_t>(a)]);
  }
  static constexpr const char* kShapes[] = {"const", "sinusoid", "file", "random"};
  ordered_json u0;
  u0["shape"] = kShapes[static_cast<int>(c.u0.shape)];
  u0["value"] = c.u0.value;
  u0["amplitude"] = c.u0.amplitude;
  u0["mode"] = c.u0.mode;
  u0["mode_y"] = c.u0.mode_y;
  if (!c.u0.file.empty()) u0["file"] = c.u0.file.string();
  if (c.u0.seed) u0["seed"] = *c.u0.seed;
  j["u0"] = u0;
  j["p"] = c.flow.p;
  j["tau"] = c.flow.tau;
  j["t_max"] = c.flow.t_max;
  j["cfl_safety"] = c.flow.cfl_safety;
  j["integrator"] = std::string(to_string(c.flow.integrator));
  j["eps_stationary"] = c.flow.eps_stationary;
  j["vtilde_max"] = c.flow.vtilde_max;
  j["eps_guard"] = c.flow.eps_guard;
  j["output"]["stride"] = c.flow.monitor_stride;
  j["output"]["snapshot_stride"] = c.flow.snapshot_stride;
  j["output"]["dir"] = c.output_dir.string();
  j["lambda"]["samples"] = c.lambda_samples;
  return j;
}

ordered_json bounds_object(const BoundsReport& b) {
  ordered_json j;
  j["passed"] = b.passed();
  j["tol_constant"] = b.tol_constant;
  j["tol"] = b.tol;
  j["h"] = b.h;
  j["dt"] = b.dt;
  j["checks"] = ordered_json::array();
  for (const auto& c : b.checks) {
    ordered_json o;
    o["name"] = c.name;
    o["applicable"] = c.applicable;
    o["passed"] = c.passed;
    o["worst_violation"] = number_or_null(c.worst_violation);
    o["worst_time"] = c.worst_time;
    o["measured_constant"] = number_or_null(c.measured_constant);
    j["checks"].push_back(o);
  }
  return j;
}

}  // namespace

const char* version() { return PMCF_VERSION; }

std::string monitor_json(const MonitorRecord& record) { return monitor_object(record).dump(); }

void write_monitors_ndjson(const std::filesystem::path& path, std::span<const MonitorRecord> monitors) {
  std::ofstream out = open_for_write(path);
  for (const auto& r : monitors) out << monitor_json(r) << '\n';
  finish(out, path);
}

void write_snapshot_csv(const std::filesystem::path& path, const GraphState& state, const GeometryFields& fields) {
  std::ofstream out = open_for_write(path);
  const int n = state.grid.n();
  out << (n == 1 ? "x" : "x,y") << ",u,v,H,normA2\n";
  for (std::size_t node = 0; node < state.u.size(); ++node) {
    const Vec2 x = state.grid.coordinates(node);
    out << x[0] << ',';
    if (n > 1) out << x[1] << ',';
    out << state.u[node] << ',' << fields.v[node] << ',' << fields.H[node] << ',' << fields.normA2[node] << '\n';
  }
  finish(out, path);
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  ordered_json j;
  j["version"] = version();
  j["termination"] = m.termination;
  j["abort_reason"] = m.abort_reason;
  j["steps"] = m.steps;
  j["t_final"] = m.t_final;
  ordered_json echo = ordered_json::object();
  for (const auto& [k, v] : m.config.entries) echo[k] = v;
  j["config_file"] = echo;
  j["config"] = config_object(m.config);
  j["tolerances"]["eps_stationary"] = m.config.flow.eps_stationary;
  j["tolerances"]["eps_guard"] = m.config.flow.eps_guard;
  j["tolerances"]["vtilde_max"] = m.config.flow.vtilde_max;
  j["tolerances"]["bound_tol_constant"] = m.bounds.tol_constant;
  j["tolerances"]["bound_tol"] = m.bounds.tol;
  j["lambda"] = m.lambda;
  j["bounds"] = bounds_object(m.bounds);
  j["snapshots"] = ordered_json::array();
  for (const auto& [file, t] : m.snapshots) j["snapshots"].push_back({{"file", file}, {"t", t}});
  j["wall_time_seconds"] = m.wall_time_seconds;
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

void write_residuals_csv(const std::filesystem::path& path, std::span<const ResidualReport> reports) {
  std::ofstream out = open_for_write(path);
  out << "identity,fixture,sweep,dt,h,max_residual\n";
  for (const auto& r : reports)
    for (const auto& [name, rows] : {std::pair{"dt", &r.dt_sweep}, std::pair{"h", &r.h_sweep}})
      for (const auto& row : *rows)
        out << to_string(r.identity) << ',' << to_string(r.fixture) << ',' << name << ',' << row.dt << ','
            << row.h << ',' << row.residual << '\n';
  finish(out, path);
}

void write_slopes_json(const std::filesystem::path& path, std::span<const ResidualReport> reports) {
  ordered_json j;
  j["thresholds"]["dt"] = kMinSlopeDt;
  j["thresholds"]["h"] = kMinSlopeH;
  j["exact_residual"] = kExactResidual;
  j["results"] = ordered_json::array();
  bool all = true;
  for (const auto& r : reports) {
    ordered_json o;
    o["identity"] = std::string(to_string(r.identity));
    o["fixture"] = std::string(to_string(r.fixture));
    o["slope_dt"] = optional_number(r.slope_dt);
    o["slope_h"] = optional_number(r.slope_h);
    o["exact"] = r.exact;
    o["passed"] = r.meets_thresholds();
    all = all && r.meets_thresholds();
    j["results"].push_back(o);
  }
  j["passed"] = all;
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

void write_sweep_json(const std::filesystem::path& path, const SweepResult& sweep, double p) {
  ordered_json j;
  j["p"] = p;
  j["complete"] = sweep.complete;
  j["cauchy"] = sweep.cauchy;
  j["error"] = sweep.error;
  j["entries"] = ordered_json::array();
  for (const auto& e : sweep.entries) {
    ordered_json o;
    o["tau"] = e.tau;
    o["termination"] = std::string(to_string(e.termination));
    o["abort_reason"] = e.abort_reason;
    o["t_final"] = e.t_final;
    o["steps"] = e.steps;
    o["sup_H_error"] = e.sup_H_error;
    o["sup_abs_H"] = e.sup_abs_H;
    o["limit"] = e.limit;
    j["entries"].push_back(o);
  }
  j["distances"] = sweep.distances;
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

}  // namespace pmcf
