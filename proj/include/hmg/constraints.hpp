#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hmg/mesh.hpp"
#include "hmg/sparse.hpp"

namespace hmg {

// Parent -> child edge of the family tree. One edge per host occurrence: a
// hanging node hosted by several coarse elements receives one edge from each
// host node with a nonzero basis value at it.
struct FamilyEdge {
  int child = -1;
  double weight = 0.0;
  int host = -1;            // index into MeshLevel::hosts
  bool designated = false;  // edge comes from the child's designated (coarsest) host
};

class FamilyTree {
 public:
  static FamilyTree build(const MeshLevel& lvl);

  int num_nodes() const { return static_cast<int>(offsets_.size()) - 1; }
  std::span<const FamilyEdge> children(int parent) const {
    return {edges_.data() + offsets_[parent], static_cast<std::size_t>(offsets_[parent + 1] - offsets_[parent])};
  }
  int parent_count(int child) const { return parent_count_[child]; }
  int max_generations() const { return max_generations_; }

 private:
  std::vector<int> offsets_;
  std::vector<FamilyEdge> edges_;
  std::vector<int> parent_count_;
  int max_generations_ = 0;
};

// Direct children of a node with their weights, repeated per host occurrence.
std::vector<std::pair<int, double>> direct_children(const FamilyTree& tree, int node);

enum class PruningRule {
  // A path extension p -> c is followed only through c's designated host.
  DesignatedHost,
  // One edge per (p, c) pair weighted by the coarsest host containing p; an
  // extension to c is pruned when c is a direct child of a path ancestor other
  // than its immediate parent.
  AncestorChild,
};

using SparseRow = std::map<int, double>;

// Depth-first traversal of all admissible paths from `master`; coefficients of
// paths reaching the same hanging node are summed. Throws std::runtime_error
// on a cycle or when a path exceeds the level's refinement depth.
SparseRow build_constraint_row(const MeshLevel& lvl, const FamilyTree& tree, int master,
                               PruningRule rule = PruningRule::DesignatedHost);

// R̂ by column recursion over hanging nodes in order of host depth.
CsrMatrix assemble_Rhat(const MeshLevel& lvl);
// R̂ from per-master path rows.
CsrMatrix assemble_Rhat_paths(const MeshLevel& lvl, const FamilyTree& tree, PruningRule rule);

// Largest jump of any constrained basis function across interfaces between
// elements of different refinement depth, sampled `samples` times per direction
// on each fine-side entity.
double verify_continuity(const MeshLevel& lvl, const CsrMatrix& rhat, int samples = 5);

// `master -> {hanging: coeff, ...}` per line, for masters with constraints.
std::string constraint_listing(const MeshLevel& lvl, const CsrMatrix& rhat);

}  // namespace hmg
