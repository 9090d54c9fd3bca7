#include "hmg/markers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace hmg {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  __extension__ using u128 = unsigned __int128;
  const u128 p = static_cast<u128>(next()) * bound;
  return static_cast<std::uint64_t>(p >> 64);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<int> mark_all(const MeshLevel& level) {
  std::vector<int> m(level.num_elements());
  std::iota(m.begin(), m.end(), 0);
  return m;
}

std::vector<int> mark_quadrant(const MeshLevel& level) {
  std::vector<int> m;
  for (int e = 0; e < level.num_elements(); ++e) {
    const Point c = level.centroid(e);
    if (c[0] >= 0.0 && c[1] >= 0.0) m.push_back(e);
  }
  return m;
}

std::vector<int> mark_circle(const MeshLevel& level, int k) {
  if (k < 1) throw std::invalid_argument("mark_circle: k must be at least 1");
  const double radius = std::numbers::pi / (4.0 * k);
  std::vector<int> m;
  for (int e = 0; e < level.num_elements(); ++e) {
    const Point c = level.centroid(e);
    if (std::hypot(c[0], c[1]) < radius) m.push_back(e);
  }
  return m;
}

std::vector<int> mark_random(const MeshLevel& level, double fraction, std::uint64_t seed, bool newest_only) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("mark_random: fraction outside [0,1]");
  std::vector<int> idx;
  for (int e = 0; e < level.num_elements(); ++e)
    if (!newest_only || level.elements[e].created_level == level.index) idx.push_back(e);
  const int n = static_cast<int>(idx.size());
  const int count = static_cast<int>(std::floor(fraction * n));
  SplitMix64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Strategy parse_strategy(const std::string& name) {
  if (name == "uniform") return Strategy::Uniform;
  if (name == "quadrant") return Strategy::Quadrant;
  if (name == "circle") return Strategy::Circle;
  if (name == "random") return Strategy::Random;
  if (name == "random-active") return Strategy::RandomActive;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Uniform: return "uniform";
    case Strategy::Quadrant: return "quadrant";
    case Strategy::Circle: return "circle";
    case Strategy::Random: return "random";
    case Strategy::RandomActive: return "random-active";
  }
  return "?";
}

std::vector<int> plan_markers(const MeshLevel& level, const RefinementPlan& plan) {
  const int k = level.index;
  if (k < plan.uniform_levels || plan.strategy == Strategy::Uniform) return mark_all(level);
  switch (plan.strategy) {
    case Strategy::Quadrant: return mark_quadrant(level);
    case Strategy::Circle: return mark_circle(level, k);
    case Strategy::Random: return mark_random(level, plan.fraction, plan.seed + static_cast<std::uint64_t>(k), true);
    case Strategy::RandomActive:
      return mark_random(level, plan.fraction, plan.seed + static_cast<std::uint64_t>(k), false);
    case Strategy::Uniform: break;
  }
  return mark_all(level);
}

void apply_plan(HierarchicalMesh& mesh, const RefinementPlan& plan) {
  if (plan.levels < 0) throw std::invalid_argument("apply_plan: negative level count");
  while (mesh.num_levels() <= plan.levels) mesh.refine(plan_markers(mesh.finest(), plan));
}

}  // namespace hmg
