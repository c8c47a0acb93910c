#pragma once

// Explicit integration of the graph form of the regularized power mean curvature flow
//
//   du/dt = -e^{-psi} v (H^p - tau),   0 < p <= 1, tau >= 0,
//
// with a CFL step from the principal coefficient p H^{p-1} of the linearized operator.

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pmcf/graph_geometry.hpp"

namespace pmcf {

enum class Integrator { Euler, RK2 };

std::string_view to_string(Integrator integrator);

struct FlowConfig {
  double p = 1.0;
  double tau = 0.0;
  double cfl_safety = 0.2;
  double t_max = 1.0;
  double eps_stationary = 1e-6;
  Integrator integrator = Integrator::Euler;
  double vtilde_max = 1e3;
  double eps_guard = 1e-6;
  /// Record a monitor every `monitor_stride` steps (initial and final states are always recorded).
  int monitor_stride = 1;
  /// Keep a snapshot every `snapshot_stride` steps; 0 keeps only the initial and final states.
  int snapshot_stride = 0;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

/// Scalar diagnostics of one accepted state.
struct MonitorRecord {
  std::size_t step = 0;
  double t = 0.0;
  double inf_u = 0.0;
  double sup_u = 0.0;
  double mean_u = 0.0;
  double sup_H = 0.0;
  double min_H = 0.0;
  double min_HpMinusTau = 0.0;
  double max_abs_HpMinusTau = 0.0;
  double max_vtilde = 0.0;
  double max_normA = 0.0;
  /// sup H^{1-p}(t) and sup H^{1-p}(0) + (1-p) Lambda t; NaN when p = 1 or not annotated.
  double bound44_lhs = kNotApplicable;
  double bound44_rhs = kNotApplicable;
  /// sup H(t) and sup H(0) e^{Lambda t}; NaN when p < 1 or not annotated.
  double bound45_lhs = kNotApplicable;
  double bound45_rhs = kNotApplicable;
  /// Step taken from this state (0 for the final record).
  double dt_used = 0.0;
};

enum class Termination { Stationary, TimeExhausted, Aborted };

std::string_view to_string(Termination termination);

struct RunResult {
  Termination termination = Termination::Aborted;
  std::string abort_reason;
  std::vector<MonitorRecord> monitors;
  std::vector<GraphState> snapshots;
  GraphState final_state;
  std::size_t steps = 0;
};

/// H^p with the p = 1 case exact; throws NonpositiveCurvature when p < 1 and H <= 0.
double curvature_power(double H, double p, std::size_t node = 0);

/// du/dt per node for already assembled geometry.
std::vector<double> rhs(const GraphState& state, const GeometryFields& fields, const FlowConfig& config);
/// du/dt per node; assembles the geometry.
std::vector<double> rhs(const GraphState& state, const FlowConfig& config);

/// Largest stable explicit step, capped by t_max - t. Throws StiffnessError below 1e-14.
double stable_dt(const GraphState& state, const GeometryFields& fields, const FlowConfig& config);
double stable_dt(const GraphState& state, const FlowConfig& config);

/// One Euler or RK2 (Heun) step. The result is re-validated as spacelike.
GraphState step(const GraphState& state, double dt, const FlowConfig& config);

/// Scalar summary of a state (bound fields left NaN).
MonitorRecord summarize(const GraphState& state, const GeometryFields& fields, const FlowConfig& config);

/// Thrown when initial data violate min H^p >= tau (or min H > 0 for tau = 0).
class InadmissibleInitialData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integrates until stationary (max |H^p - tau| < eps_stationary), t >= t_max, or an abort.
/// Throws InadmissibleInitialData before stepping if the initial state is inadmissible.
RunResult run(const GraphState& initial, const FlowConfig& config);

/// Checks the admissibility precondition of `run` without integrating.
void require_admissible(const GraphState& initial, const FlowConfig& config);

struct SweepEntry {
  double tau = 0.0;
  Termination termination = Termination::Aborted;
  std::string abort_reason;
  double t_final = 0.0;
  std::size_t steps = 0;
  /// Final height field.
  std::vector<double> limit;
  /// sup |H - tau^{1/p}| of the final state.
  double sup_H_error = 0.0;
  /// sup |H| of the final state.
  double sup_abs_H = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  /// Sup-norm distances between successive limits.
  std::vector<double> distances;
  /// All runs completed stationary and the distances strictly decrease.
  bool cauchy = false;
  bool complete = false;
  std::string error;
};

/// Runs `run` for each tau of a list (expected descending) from the same initial data.
/// A failing run stops the sweep; partial results are returned with complete = false.
SweepResult tau_sweep(const GraphState& initial, const FlowConfig& config, std::span<const double> taus);

}  // namespace pmcf
