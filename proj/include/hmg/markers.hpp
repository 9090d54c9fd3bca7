#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmg/mesh.hpp"

namespace hmg {

// SplitMix64: 64-bit state, fixed output function; identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform integer in [0, bound) by 128-bit multiply-shift.
  std::uint64_t below(std::uint64_t bound);
  // Uniform double in [0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

std::vector<int> mark_all(const MeshLevel& level);
// Active elements whose centroid has x >= 0 and y >= 0.
std::vector<int> mark_quadrant(const MeshLevel& level);
// Active elements whose centroid lies within radius pi/(4k) of the origin.
std::vector<int> mark_circle(const MeshLevel& level, int k);
// floor(fraction * |candidates|) elements drawn without replacement, sorted.
// Candidates are the elements created by the most recent refinement when
// `newest_only` is set, otherwise every active element.
std::vector<int> mark_random(const MeshLevel& level, double fraction, std::uint64_t seed, bool newest_only = true);

// Random selects among the newest elements, so refined regions stay nested;
// RandomActive selects among all active elements and lets interfaces persist
// and cross over from one level to the next.
enum class Strategy { Uniform, Quadrant, Circle, Random, RandomActive };
Strategy parse_strategy(const std::string& name);
std::string strategy_name(Strategy s);

struct RefinementPlan {
  Strategy strategy = Strategy::Quadrant;
  int levels = 3;             // finest level index J (levels 0..J)
  int uniform_levels = 1;     // leading uniform refinements before the strategy applies
  double fraction = 0.5;      // random strategy
  std::uint64_t seed = 42;    // random strategy; level k uses seed + k
};

// Applies the plan to a freshly loaded mesh until it has plan.levels + 1 levels.
void apply_plan(HierarchicalMesh& mesh, const RefinementPlan& plan);
// Marker set used to go from level k to k+1 under the plan.
std::vector<int> plan_markers(const MeshLevel& level, const RefinementPlan& plan);

}  // namespace hmg
