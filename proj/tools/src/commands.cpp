#include "pmcf_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pmcf/bounds.hpp"
#include "pmcf/config.hpp"
#include "pmcf/errors.hpp"
#include "pmcf/flow.hpp"
#include "pmcf/io.hpp"
#include "pmcf/lagrangian.hpp"

namespace pmcf::cli {

namespace fs = std::filesystem;

namespace {

struct Prepared {
  RunConfig config;
  GraphState initial;
};

std::optional<Prepared> prepare(const fs::path& config_path, const CommonOptions& options, std::ostream& err) {
  try {
    RunConfig config = load_config(config_path);
    GraphState initial = make_initial_state(config, options.seed);
    return Prepared{std::move(config), std::move(initial)};
  } catch (const ConfigError& e) {
    err << "config error: " << config_path.string() << ": " << e.what() << '\n';
  } catch (const FlowError& e) {
    err << "config error: " << config_path.string() << ": initial data: " << e.what() << '\n';
  }
  return std::nullopt;
}

}  // namespace

int cmd_run(const fs::path& config_path, const CommonOptions& options, std::ostream& log, std::ostream& err) {
  auto prepared = prepare(config_path, options, err);
  if (!prepared) return kExitUsage;
  const RunConfig& config = prepared->config;
  const GraphState& initial = prepared->initial;

  try {
    require_admissible(initial, config.flow);
  } catch (const InadmissibleInitialData& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  RunResult result = run(initial, config.flow);

  const double lambda = lambda_bound(initial.chart, visited_region(result.monitors), config.lambda_samples);
  annotate_bounds(result.monitors, lambda, config.flow.p);
  const BoundsReport bounds =
      check_bounds(result.monitors, lambda, config.flow.p, config.flow.tau, initial.grid.min_spacing());

  const fs::path out_dir = options.out.value_or(config.output_dir);
  RunManifest manifest;
  manifest.config = config;
  manifest.termination = std::string(to_string(result.termination));
  manifest.abort_reason = result.abort_reason;
  manifest.steps = result.steps;
  manifest.t_final = result.final_state.t;
  manifest.lambda = lambda;
  manifest.bounds = bounds;
  try {
    fs::create_directories(out_dir);
    write_monitors_ndjson(out_dir / "monitors.ndjson", result.monitors);
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
      const GraphState& snap = result.snapshots[k];
      const std::string name = "snapshots/u_" + std::to_string(k) + ".csv";
      write_snapshot_csv(out_dir / name, snap, assemble_geometry(snap, {config.flow.eps_guard}));
      manifest.snapshots.emplace_back(name, snap.t);
    }
    manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(out_dir / "manifest.json", manifest);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kExitFailure;
  }

  if (!options.quiet) {
    log << "termination: " << manifest.termination << "  t = " << manifest.t_final << "  steps = " << result.steps
        << "\nLambda = " << lambda << "  bounds " << (bounds.passed() ? "passed" : "FAILED") << " (tol "
        << bounds.tol << ")\noutput: " << out_dir.string() << '\n';
  }
  if (!bounds.passed()) err << "warning: " << bounds.failure() << '\n';
  if (result.termination == Termination::Aborted) {
    err << "run aborted: " << result.abort_reason << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_verify(const std::string& identity, const std::string& fixture, int levels, const CommonOptions& options,
               std::ostream& log, std::ostream& err) {
  std::vector<Identity> identities;
  if (identity == "all") {
    identities = all_identities();
  } else if (auto id = parse_identity(identity)) {
    identities.push_back(*id);
  } else {
    err << "unknown identity '" << identity << "' (expected all";
    for (Identity i : all_identities()) err << ", " << to_string(i);
    err << ")\n";
    return kExitUsage;
  }
  std::vector<Fixture> fixtures;
  if (fixture == "all") {
    fixtures = {Fixture::MinkowskiSinusoid, Fixture::RobertsonWalkerSinusoid};
  } else if (auto f = parse_fixture(fixture)) {
    fixtures.push_back(*f);
  } else {
    err << "unknown fixture '" << fixture << "' (expected minkowski, robertson-walker or all)\n";
    return kExitUsage;
  }
  if (levels < 3) {
    err << "refinement levels must be >= 3 to fit a slope, got " << levels << '\n';
    return kExitUsage;
  }

  const VerifyOptions vo = VerifyOptions::with_levels(levels);
  std::vector<ResidualReport> reports;
  bool all = true;
  for (Fixture f : fixtures)
    for (Identity id : identities) {
      try {
        reports.push_back(verify_identity(id, f, vo));
      } catch (const FlowError& e) {
        err << to_string(id) << " on " << to_string(f) << ": " << e.what() << '\n';
        return kExitFailure;
      }
      const ResidualReport& r = reports.back();
      all = all && r.meets_thresholds();
      if (!options.quiet) {
        auto slope = [](const std::optional<double>& s) {
          std::ostringstream o;
          if (s)
            o << std::fixed << std::setprecision(3) << *s;
          else
            o << "exact";
          return o.str();
        };
        log << std::left << std::setw(18) << to_string(id) << std::setw(18) << to_string(f)
            << "slope_dt " << std::setw(8) << slope(r.slope_dt) << "slope_h " << std::setw(8) << slope(r.slope_h)
            << (r.meets_thresholds() ? "PASS" : "FAIL") << '\n';
      }
    }

  const fs::path out_dir = options.out.value_or("out");
  try {
    write_residuals_csv(out_dir / "residuals.csv", reports);
    write_slopes_json(out_dir / "slopes.json", reports);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kExitFailure;
  }
  return all ? kExitOk : kExitFailure;
}

std::vector<double> parse_tau_list(const std::string& text) {
  std::string flat = text;
  std::replace(flat.begin(), flat.end(), ',', ' ');
  std::istringstream in(flat);
  std::vector<double> taus;
  for (std::string tok; in >> tok;) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (*end != '\0' || !std::isfinite(v)) throw ConfigError("taus", 0, "bad value '" + tok + "'");
    if (v < 0.0) throw ConfigError("taus", 0, "values must be >= 0");
    if (!taus.empty() && !(v < taus.back())) throw ConfigError("taus", 0, "list must be strictly descending");
    taus.push_back(v);
  }
  if (taus.empty()) throw ConfigError("taus", 0, "list is empty");
  return taus;
}

int cmd_sweep_tau(const fs::path& config_path, const std::string& taus_text, const CommonOptions& options,
                  std::ostream& log, std::ostream& err) {
  std::vector<double> taus;
  try {
    taus = parse_tau_list(taus_text);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  auto prepared = prepare(config_path, options, err);
  if (!prepared) return kExitUsage;
  const RunConfig& config = prepared->config;

  const SweepResult sweep = tau_sweep(prepared->initial, config.flow, taus);
  const fs::path out_dir = options.out.value_or(config.output_dir);
  try {
    write_sweep_json(out_dir / "sweep.json", sweep, config.flow.p);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kExitFailure;
  }
  if (!options.quiet) {
    for (const auto& e : sweep.entries)
      log << "tau " << e.tau << ": " << to_string(e.termination) << "  t = " << e.t_final
          << "  sup|H - tau^(1/p)| = " << e.sup_H_error << '\n';
    for (std::size_t i = 0; i < sweep.distances.size(); ++i)
      log << "distance " << i << "-" << i + 1 << ": " << sweep.distances[i] << '\n';
    log << "cauchy: " << (sweep.cauchy ? "yes" : "no") << '\n';
  }
  if (!sweep.error.empty()) err << "sweep stopped: " << sweep.error << '\n';
  return sweep.cauchy ? kExitOk : kExitFailure;
}

}  // namespace pmcf::cli
