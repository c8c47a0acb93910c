#include "pmcf/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "pmcf/errors.hpp"

namespace pmcf {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "family",     "a",          "grid.n",         "grid.sizes",    "grid.periods",      "u0",
      "u0.value",   "u0.amplitude", "u0.mode",      "u0.mode_y",     "u0.file",           "u0.seed",
      "p",          "tau",        "t_max",          "cfl_safety",    "integrator",        "eps_stationary",
      "vtilde_max", "eps_guard",  "output.stride",  "output.snapshot_stride", "output.dir", "lambda.samples"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

struct Entry {
  std::string value;
  int line;
};

class Entries {
 public:
  explicit Entries(std::map<std::string, Entry> map) : map_(std::move(map)) {}

  bool has(const std::string& key) const { return map_.count(key) != 0; }
  int line(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? 0 : it->second.line;
  }

  std::optional<std::string> text(const std::string& key) const {
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second.value;
  }

  std::optional<double> number(const std::string& key) const {
    auto s = text(key);
    if (!s) return std::nullopt;
    return parse_number(key, *s);
  }

  std::optional<long long> integer(const std::string& key) const {
    auto s = text(key);
    if (!s) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s->c_str(), &end, 10);
    if (s->empty() || *end != '\0' || errno == ERANGE) fail(key, "expected an integer, got '" + *s + "'");
    return v;
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    auto s = text(key);
    if (!s) return out;
    std::string flat = *s;
    std::replace(flat.begin(), flat.end(), ',', ' ');
    std::istringstream in(flat);
    std::string tok;
    while (in >> tok) out.push_back(parse_number(key, tok));
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError(key, line(key), message);
  }

 private:
  double parse_number(const std::string& key, const std::string& s) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
      fail(key, "expected a finite number, got '" + s + "'");
    return v;
  }

  std::map<std::string, Entry> map_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  std::map<std::string, Entry> map;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", line_no, "missing key before '='");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!known_keys().count(key)) throw ConfigError(key, line_no, "unknown key");
    if (map.count(key))
      throw ConfigError(key, line_no, "repeated key (first set on line " + std::to_string(map[key].line) + ")");
    map[key] = {value, line_no};
    cfg.entries.emplace_back(key, value);
  }
  const Entries e(std::move(map));

  const std::string family = e.text("family").value_or("minkowski");
  if (family == "minkowski") {
    cfg.family = ChartFamily::MinkowskiTorus;
    if (e.has("a")) e.fail("a", "scale factor preset only applies to family robertson-walker");
  } else if (family == "robertson-walker") {
    cfg.family = ChartFamily::RobertsonWalker;
    if (!e.has("a")) e.fail("a", "family robertson-walker requires a scale factor preset");
    cfg.a_preset = *e.text("a");
  } else if (family == "custom") {
    e.fail("family", "the custom family is only available through the library interface");
  } else {
    e.fail("family", "expected minkowski or robertson-walker, got '" + family + "'");
  }

  const long long n = e.integer("grid.n").value_or(1);
  if (n < 1 || n > kMaxSpatial) e.fail("grid.n", "spatial dimension must be 1 or 2");
  cfg.n = static_cast<int>(n);

  if (!cfg.a_preset.empty()) {
    try {
      ScaleFactor::preset(cfg.a_preset, cfg.n);
    } catch (const ConfigError& err) {
      e.fail("a", err.message());
    }
  }

  const std::vector<double> sizes = e.has("grid.sizes") ? e.list("grid.sizes") : std::vector<double>{64.0};
  if (sizes.size() != static_cast<std::size_t>(cfg.n) && sizes.size() != 1)
    e.fail("grid.sizes", "expected 1 or grid.n entries");
  for (int a = 0; a < cfg.n; ++a) {
    const double s = sizes.size() == 1 ? sizes[0] : sizes[static_cast<std::size_t>(a)];
    if (s != std::floor(s) || s < 8 || s > 1 << 20) e.fail("grid.sizes", "node counts must be integers >= 8");
    cfg.sizes[static_cast<std::size_t>(a)] = static_cast<int>(s);
  }
  if (cfg.n == 1) cfg.sizes[1] = 1;

  if (e.has("grid.periods")) {
    const std::vector<double> periods = e.list("grid.periods");
    if (periods.size() != static_cast<std::size_t>(cfg.n) && periods.size() != 1)
      e.fail("grid.periods", "expected 1 or grid.n entries");
    for (int a = 0; a < cfg.n; ++a) {
      const double L = periods.size() == 1 ? periods[0] : periods[static_cast<std::size_t>(a)];
      if (!(L > 0.0)) e.fail("grid.periods", "periods must be positive");
      cfg.periods[static_cast<std::size_t>(a)] = L;
    }
  }

  const std::string shape = e.text("u0").value_or("const");
  if (shape == "const") {
    cfg.u0.shape = InitialShape::Const;
  } else if (shape == "sinusoid") {
    cfg.u0.shape = InitialShape::Sinusoid;
  } else if (shape == "file") {
    cfg.u0.shape = InitialShape::File;
    if (!e.has("u0.file")) e.fail("u0.file", "u0 = file requires u0.file");
  } else if (shape == "random") {
    cfg.u0.shape = InitialShape::Random;
  } else {
    e.fail("u0", "expected const, sinusoid, file or random, got '" + shape + "'");
  }
  cfg.u0.value = e.number("u0.value").value_or(0.0);
  cfg.u0.amplitude = e.number("u0.amplitude").value_or(0.0);
  cfg.u0.mode = static_cast<int>(e.integer("u0.mode").value_or(1));
  cfg.u0.mode_y = static_cast<int>(e.integer("u0.mode_y").value_or(0));
  if (cfg.u0.mode < 0) e.fail("u0.mode", "must be >= 0");
  if (cfg.u0.mode_y < 0) e.fail("u0.mode_y", "must be >= 0");
  if (auto f = e.text("u0.file")) {
    std::filesystem::path p(*f);
    cfg.u0.file = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (auto s = e.integer("u0.seed")) {
    if (*s < 0) e.fail("u0.seed", "must be >= 0");
    cfg.u0.seed = static_cast<std::uint64_t>(*s);
  }

  FlowConfig& flow = cfg.flow;
  flow.p = e.number("p").value_or(flow.p);
  flow.tau = e.number("tau").value_or(flow.tau);
  flow.t_max = e.number("t_max").value_or(flow.t_max);
  flow.cfl_safety = e.number("cfl_safety").value_or(flow.cfl_safety);
  flow.eps_stationary = e.number("eps_stationary").value_or(flow.eps_stationary);
  flow.vtilde_max = e.number("vtilde_max").value_or(flow.vtilde_max);
  flow.eps_guard = e.number("eps_guard").value_or(flow.eps_guard);
  if (auto s = e.text("integrator")) {
    if (*s == "euler")
      flow.integrator = Integrator::Euler;
    else if (*s == "rk2")
      flow.integrator = Integrator::RK2;
    else
      e.fail("integrator", "expected euler or rk2, got '" + *s + "'");
  }
  flow.monitor_stride = static_cast<int>(e.integer("output.stride").value_or(1));
  flow.snapshot_stride = static_cast<int>(e.integer("output.snapshot_stride").value_or(0));
  try {
    flow.validate();
  } catch (const ConfigError& err) {
    e.fail(err.key(), err.message());
  }

  if (auto d = e.text("output.dir")) {
    if (d->empty()) e.fail("output.dir", "must not be empty");
    cfg.output_dir = *d;
  }
  const long long samples = e.integer("lambda.samples").value_or(cfg.lambda_samples);
  if (samples < 1) e.fail("lambda.samples", "must be >= 1");
  cfg.lambda_samples = static_cast<int>(samples);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot read configuration file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

SpacetimeChart make_chart(const RunConfig& config) {
  if (config.family == ChartFamily::RobertsonWalker)
    return SpacetimeChart::robertson_walker(config.n, ScaleFactor::preset(config.a_preset, config.n), config.periods);
  return SpacetimeChart::minkowski(config.n, config.periods);
}

Grid make_grid(const RunConfig& config) { return Grid(config.n, config.sizes, config.periods); }

namespace {

std::vector<double> read_u0_file(const std::filesystem::path& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("u0.file", 0, "cannot read '" + path.string() + "'");
  std::vector<double> out;
  std::string line;
  int column = -1;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (first) {
      first = false;
      auto it = std::find(tokens.begin(), tokens.end(), "u");
      if (it != tokens.end()) {
        column = static_cast<int>(it - tokens.begin());
        continue;
      }
    }
    if (column >= 0) {
      if (static_cast<int>(tokens.size()) <= column) throw ConfigError("u0.file", 0, "short row in '" + path.string() + "'");
      tokens = {tokens[static_cast<std::size_t>(column)]};
    }
    for (const auto& tok : tokens) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (*end != '\0' || !std::isfinite(v))
        throw ConfigError("u0.file", 0, "bad value '" + tok + "' in '" + path.string() + "'");
      out.push_back(v);
    }
  }
  if (out.size() != expected) {
    std::ostringstream msg;
    msg << "'" << path.string() << "' holds " << out.size() << " values, grid has " << expected << " nodes";
    throw ConfigError("u0.file", 0, msg.str());
  }
  return out;
}

}  // namespace

GraphState make_initial_state(const RunConfig& config, std::optional<std::uint64_t> seed) {
  const Grid grid = make_grid(config);
  const SpacetimeChart chart = make_chart(config);
  const InitialDataSpec& s = config.u0;
  std::vector<double> u(grid.node_count(), s.value);

  switch (s.shape) {
    case InitialShape::Const:
      break;
    case InitialShape::Sinusoid:
      for (std::size_t node = 0; node < u.size(); ++node) {
        const Vec2 x = grid.coordinates(node);
        u[node] += s.amplitude * std::sin(s.mode * kTwoPi * x[0] / grid.periods()[0]);
        if (config.n > 1 && s.mode_y > 0) u[node] += s.amplitude * std::sin(s.mode_y * kTwoPi * x[1] / grid.periods()[1]);
      }
      break;
    case InitialShape::File:
      u = read_u0_file(s.file, grid.node_count());
      break;
    case InitialShape::Random: {
      // Low-mode trigonometric polynomial with sup norm at most `amplitude`.
      std::mt19937_64 rng(seed.value_or(s.seed.value_or(0)));
      std::uniform_real_distribution<double> coeff(-1.0, 1.0);
      constexpr int kModes = 3;
      std::array<std::array<double, 4>, kModes> c{};
      double total = 0.0;
      for (auto& m : c)
        for (int a = 0; a < (config.n > 1 ? 4 : 2); ++a) {
          m[static_cast<std::size_t>(a)] = coeff(rng);
          total += std::abs(m[static_cast<std::size_t>(a)]);
        }
      for (std::size_t node = 0; node < u.size(); ++node) {
        const Vec2 x = grid.coordinates(node);
        double w = 0.0;
        for (int m = 0; m < kModes; ++m) {
          const double ax = (m + 1) * kTwoPi * x[0] / grid.periods()[0];
          w += c[m][0] * std::cos(ax) + c[m][1] * std::sin(ax);
          if (config.n > 1) {
            const double ay = (m + 1) * kTwoPi * x[1] / grid.periods()[1];
            w += c[m][2] * std::cos(ay) + c[m][3] * std::sin(ay);
          }
        }
        u[node] += total > 0.0 ? s.amplitude * w / total : 0.0;
      }
      break;
    }
  }
  return GraphState(0.0, std::move(u), grid, chart);
}

}  // namespace pmcf
