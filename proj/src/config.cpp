#include "hmg/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hmg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if constexpr (std::is_floating_point_v<T>) {
    std::istringstream is(v);
    is.imbue(std::locale::classic());
    is >> out;
    if (!is || !is.eof()) throw ConfigError("config: bad number for '" + key + "': " + v);
  } else {
    auto [p, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || p != last) throw ConfigError("config: bad integer for '" + key + "': " + v);
  }
  return out;
}

int parse_positive(const std::string& key, const std::string& v) {
  const int n = parse_number<int>(key, v);
  if (n < 1) throw ConfigError("config: '" + key + "' must be positive");
  return n;
}

std::vector<int> parse_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(key, trim(item)));
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: bad boolean for '" + key + "': " + v);
}

// Wraps parsers that throw std::invalid_argument so every failure surfaces as ConfigError.
template <typename F>
auto checked(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config: bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

std::vector<std::string> config_keys() {
  return {"strategy", "levels", "family",   "smoother",  "omega",  "nu_pre",   "nu_post",
          "rtol",     "eps",    "seed",     "mesh",      "krylov", "mode",     "norm",
          "uniform_levels", "fraction", "min_level", "max_it", "restart", "spectrum_levels",
          "nus",      "cap",    "materialize", "ordering"};
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "strategy") c.strategy = checked(key, [&] { return parse_strategy(v); });
  else if (key == "levels") c.levels = parse_number<int>(key, v);
  else if (key == "family") c.family = checked(key, [&] { return parse_family(v); });
  else if (key == "smoother") c.smoother = checked(key, [&] { return parse_smoother(v); });
  else if (key == "omega") c.omega = parse_number<double>(key, v);
  else if (key == "nu_pre") c.nu_pre = parse_number<int>(key, v);
  else if (key == "nu_post") c.nu_post = parse_number<int>(key, v);
  else if (key == "rtol") c.rtol = parse_number<double>(key, v);
  else if (key == "eps") c.eps = parse_number<double>(key, v);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v);
  else if (key == "mesh") c.mesh = v;
  else if (key == "krylov") {
    if (v != "stationary" && v != "pcg" && v != "gmres") throw ConfigError("config: unknown krylov method: " + v);
    c.krylov = v;
  } else if (key == "mode") c.mode = checked(key, [&] { return parse_mode(v); });
  else if (key == "norm") {
    if (v == "preconditioned") c.norm = MonitorNorm::Preconditioned;
    else if (v == "true") c.norm = MonitorNorm::True;
    else throw ConfigError("config: unknown norm: " + v);
  } else if (key == "uniform_levels") c.uniform_levels = parse_number<int>(key, v);
  else if (key == "fraction") c.fraction = parse_number<double>(key, v);
  else if (key == "min_level") c.min_level = parse_number<int>(key, v);
  else if (key == "max_it") c.max_it = parse_positive(key, v);
  else if (key == "restart") c.restart = parse_positive(key, v);
  else if (key == "spectrum_levels") c.spectrum_levels = parse_list(key, v);
  else if (key == "nus") c.nus = parse_list(key, v);
  else if (key == "cap") c.cap = parse_positive(key, v);
  else if (key == "materialize") c.materialize = parse_bool(key, v);
  else if (key == "ordering") c.ordering = checked(key, [&] { return parse_ordering(v); });
  else throw ConfigError("config: unknown key '" + key + "'");

  if (!c.has(key)) c.given.push_back(key);
  if (c.levels < 0) throw ConfigError("config: levels must be non-negative");
  if (c.nu_pre < 0 || c.nu_post < 0) throw ConfigError("config: smoothing counts must be non-negative");
  if (!(c.fraction >= 0.0 && c.fraction <= 1.0)) throw ConfigError("config: fraction must lie in [0,1]");
}

RunConfig parse_config(std::istream& in, RunConfig cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    set_config_value(cfg, key, value);
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in, std::move(base));
}

bool RunConfig::has(const std::string& key) const {
  return std::find(given.begin(), given.end(), key) != given.end();
}

MgOptions RunConfig::mg_options() const {
  MgOptions o;
  o.smoother = smoother;
  o.omega = omega;
  o.nu_pre = nu_pre;
  o.nu_post = nu_post;
  o.mode = mode;
  o.ordering = ordering;
  return o;
}

RefinementPlan RunConfig::plan() const {
  RefinementPlan p;
  p.strategy = strategy;
  p.levels = levels;
  p.uniform_levels = uniform_levels;
  p.fraction = fraction;
  p.seed = seed;
  return p;
}

}  // namespace hmg
