#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pmcf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommonOptions {
  /// Overrides output.dir (run, sweep-tau) or the default "out" (verify).
  std::optional<std::filesystem::path> out;
  /// Seed for the random initial-data shape.
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// Integrates one configured run and writes monitors.ndjson, snapshots/u_<k>.csv and manifest.json.
/// Returns 0 for Stationary or TimeExhausted, 1 for Aborted, 2 for configuration errors.
int cmd_run(const std::filesystem::path& config_path, const CommonOptions& options, std::ostream& log,
            std::ostream& err);

/// identity: "all" or one identity name; fixture: "minkowski", "robertson-walker" or "all".
/// Writes residuals.csv and slopes.json. Returns 0 iff every slope meets its threshold.
int cmd_verify(const std::string& identity, const std::string& fixture, int levels, const CommonOptions& options,
               std::ostream& log, std::ostream& err);

/// taus: comma- or space-separated, strictly descending. Writes sweep.json. Returns 0 iff the sweep is Cauchy.
int cmd_sweep_tau(const std::filesystem::path& config_path, const std::string& taus, const CommonOptions& options,
                  std::ostream& log, std::ostream& err);

/// Parses a tau list. Throws ConfigError (key "taus") for empty, malformed, negative or non-descending lists.
std::vector<double> parse_tau_list(const std::string& text);

}  // namespace pmcf::cli
