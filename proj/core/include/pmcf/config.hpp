#pragma once

// Run configuration: a line-oriented key = value file.
//
//   # comment
//   family        = robertson-walker      # minkowski | robertson-walker
//   a             = crossing              # exp(-t) | crossing | const
//   grid.n        = 1
//   grid.sizes    = 64                    # one entry per axis, comma or space separated
//   grid.periods  = 6.283185307179586     # optional, default 2 pi per axis
//   u0            = sinusoid              # const | sinusoid | file | random
//   u0.value      = 1.0
//   u0.amplitude  = 0.05
//   u0.mode       = 1
//   p             = 1
//   tau           = 0.3
//   t_max         = 20
//   cfl_safety    = 0.2
//   integrator    = rk2                   # euler | rk2
//   eps_stationary = 1e-6
//   output.stride = 10
//   output.dir    = out
//
// Values may be wrapped in double quotes. Unknown or repeated keys are errors.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmcf/flow.hpp"
#include "pmcf/graph_geometry.hpp"
#include "pmcf/grid.hpp"
#include "pmcf/spacetime.hpp"

namespace pmcf {

enum class InitialShape { Const, Sinusoid, File, Random };

struct InitialDataSpec {
  InitialShape shape = InitialShape::Const;
  double value = 0.0;
  double amplitude = 0.0;
  int mode = 1;
  /// Second-axis mode for n = 2; 0 leaves u independent of the second coordinate.
  int mode_y = 0;
  std::filesystem::path file;
  std::optional<std::uint64_t> seed;
};

struct RunConfig {
  ChartFamily family = ChartFamily::MinkowskiTorus;
  std::string a_preset;
  int n = 1;
  std::array<int, kMaxSpatial> sizes{64, 1};
  Vec2 periods{kTwoPi, kTwoPi};
  InitialDataSpec u0;
  FlowConfig flow;
  std::filesystem::path output_dir = "out";
  /// Lattice size for the post-run lambda_bound over the visited region.
  int lambda_samples = 256;
  /// Key/value pairs exactly as read, in file order.
  std::vector<std::pair<std::string, std::string>> entries;
};

/// Parses configuration text. Relative u0.file paths resolve against `base_dir`.
/// Throws ConfigError with the line and key of the first problem.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

/// Reads and parses a configuration file. Throws ConfigError (line 0) if it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

SpacetimeChart make_chart(const RunConfig& config);
Grid make_grid(const RunConfig& config);

/// Initial graph at t = 0. `seed` overrides u0.seed for the random shape.
/// Throws ConfigError for unreadable or mis-sized u0 files.
GraphState make_initial_state(const RunConfig& config, std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace pmcf
