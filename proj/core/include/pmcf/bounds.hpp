#pragma once

// A-priori estimates of the flow checked against a recorded monitor series.
//
//  (a) p < 1:  sup H^{1-p}(t) <= sup H^{1-p}(0) + (1-p) Lambda t
//  (b) p = 1:  sup H(t)       <= sup H(0) e^{Lambda t}
//  (c)         min H^p(t) - tau >= 0
//  (d)         inf u(t) is nonincreasing
//
// The inequalities hold exactly only in the continuum, so each is checked with
// slack tol = C (h^2 + dt). The report also carries the smallest C for which the
// series would pass, so the discretization error can be read off directly.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmcf/flow.hpp"
#include "pmcf/spacetime.hpp"

namespace pmcf {

/// Default tolerance constant C in tol = C (h^2 + dt).
inline constexpr double kBoundTolConstant = 1.0;

struct BoundCheck {
  /// "(a) sup-H power bound", "(b) sup-H exponential bound", "(c) H^p >= tau", "(d) inf u nonincreasing".
  std::string name;
  bool applicable = true;
  bool passed = true;
  /// Largest raw violation lhs - rhs over the series (negative when strictly satisfied).
  double worst_violation = 0.0;
  double worst_time = 0.0;
  /// Smallest C with worst_violation <= C (h^2 + dt); 0 when never violated.
  double measured_constant = 0.0;
};

struct BoundsReport {
  double lambda = 0.0;
  double p = 1.0;
  double tau = 0.0;
  double h = 0.0;
  double dt = 0.0;
  double tol_constant = kBoundTolConstant;
  double tol = 0.0;
  std::vector<BoundCheck> checks;

  bool passed() const;
  /// Human-readable description of the first failing check, empty if all pass.
  std::string failure() const;
};

/// Raised by require_bounds; the message names the violated bound and the time.
class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// x^0 range swept by a run: [min inf u, max sup u] over the recorded monitors.
LambdaRegion visited_region(std::span<const MonitorRecord> monitors);

/// Fills bound44_* (p < 1) or bound45_* (p = 1) of every record from the first record.
void annotate_bounds(std::vector<MonitorRecord>& monitors, double lambda, double p);

/// Evaluates (a)-(d) with tol = tol_constant (h^2 + max dt_used). Throws std::invalid_argument
/// for an empty series.
BoundsReport check_bounds(std::span<const MonitorRecord> monitors, double lambda, double p, double tau,
                          double h, double tol_constant = kBoundTolConstant);

/// Throws BoundViolation if the report has a failing check.
void require_bounds(const BoundsReport& report);

}  // namespace pmcf
