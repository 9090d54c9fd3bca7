#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmg/krylov.hpp"
#include "hmg/markers.hpp"
#include "hmg/multigrid.hpp"
#include "hmg/reference_element.hpp"
#include "hmg/smoother.hpp"

namespace hmg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Settings shared by every subcommand. Files hold one `key = value` pair
// per line; '#' starts a comment. Unknown keys are rejected.
struct RunConfig {
  Strategy strategy = Strategy::Quadrant;
  int levels = 3;
  FeFamily family{Shape::Quad, 1};
  SmootherKind smoother = SmootherKind::RichardsonIlu0;
  double omega = 0.8;
  int nu_pre = 1;
  int nu_post = 1;
  double rtol = 1e-10;
  double eps = 1e-10;
  std::uint64_t seed = 42;

  std::string mesh;                  // coarse mesh file; empty selects the built-in [-1,1]^2 grid
  std::string krylov = "pcg";        // stationary | pcg | gmres
  SmoothingMode mode = SmoothingMode::Global;
  MonitorNorm norm = MonitorNorm::Preconditioned;
  int uniform_levels = 1;
  double fraction = 0.5;
  int min_level = 3;                 // first bench row
  int max_it = 200;
  int restart = 30;
  std::vector<int> spectrum_levels{3, 5, 6};
  std::vector<int> nus{1, 2, 4, 8};
  int cap = 6000;
  bool materialize = true;
  IluOrdering ordering = IluOrdering::Natural;

  std::vector<std::string> given;    // keys set explicitly, in order
  bool has(const std::string& key) const;

  MgOptions mg_options() const;
  RefinementPlan plan() const;
};

// Applies one key/value pair; throws ConfigError on an unknown key or bad value.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
std::vector<std::string> config_keys();

}  // namespace hmg
