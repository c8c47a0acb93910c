#pragma once

// Run artifacts: monitors.ndjson, snapshots/u_<k>.csv, manifest.json, and the
// verifier and sweep reports. Every writer creates missing parent directories
// and throws std::runtime_error when a file cannot be written.

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmcf/bounds.hpp"
#include "pmcf/config.hpp"
#include "pmcf/flow.hpp"
#include "pmcf/lagrangian.hpp"

namespace pmcf {

/// Library version string.
const char* version();

/// One JSON object, no trailing newline. NaN bound fields are written as null.
std::string monitor_json(const MonitorRecord& record);

void write_monitors_ndjson(const std::filesystem::path& path, std::span<const MonitorRecord> monitors);

/// Columns x[,y],u,v,H,normA2 with one row per grid node in flat index order.
void write_snapshot_csv(const std::filesystem::path& path, const GraphState& state, const GeometryFields& fields);

struct RunManifest {
  RunConfig config;
  std::string termination;
  std::string abort_reason;
  std::size_t steps = 0;
  double t_final = 0.0;
  double lambda = 0.0;
  BoundsReport bounds;
  /// (snapshot file relative to the output directory, flow time)
  std::vector<std::pair<std::string, double>> snapshots;
  double wall_time_seconds = 0.0;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

/// Columns identity,fixture,sweep,dt,h,max_residual.
void write_residuals_csv(const std::filesystem::path& path, std::span<const ResidualReport> reports);
void write_slopes_json(const std::filesystem::path& path, std::span<const ResidualReport> reports);

void write_sweep_json(const std::filesystem::path& path, const SweepResult& sweep, double p);

}  // namespace pmcf
