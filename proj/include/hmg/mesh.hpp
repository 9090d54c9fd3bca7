#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hmg/reference_element.hpp"

namespace hmg {

enum class NodeTag : std::uint8_t { Interior = 0, Master = 1, Hanging = 2 };

enum class MeshErrorKind { Malformed, Connectivity, Degenerate, Usage };

class MeshError : public std::runtime_error {
 public:
  MeshError(MeshErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  MeshErrorKind kind() const { return kind_; }

 private:
  MeshErrorKind kind_;
};

// Coordinate-keyed node lookup. Points closer than ~quantum share a key or a
// neighbouring key; lookups probe neighbours when a coordinate sits near a
// key boundary.
class NodeLocator {
 public:
  explicit NodeLocator(double quantum = 1e-12);
  double quantum() const { return q_; }
  int find(const Point& x) const;
  // Returns the existing id if present, otherwise registers `id`.
  int insert(const Point& x, int id);
  std::size_t size() const { return map_.size(); }

 private:
  using Key = std::array<std::int64_t, 3>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  double q_;
  std::unordered_map<Key, int, KeyHash> map_;
};

// Coarse mesh description: vertices and vertex connectivity (VTK order).
struct CoarseMesh {
  int dim = 2;
  FeFamily family;
  std::vector<Point> vertices;
  std::vector<std::vector<int>> cells;
};

CoarseMesh rectangle_mesh(FeFamily family, int nx, int ny, double x0, double x1, double y0, double y1);
CoarseMesh box_mesh(FeFamily family, int nx, int ny, int nz, const Point& lo, const Point& hi);

struct LevelElement {
  int cell = -1;
  int parent = -1;        // element index at the previous level, -1 on level 0
  int child_index = -1;   // sub-cell index inside the parent, -1 if copied unchanged
  int depth = 0;          // refinement depth of the cell
  int created_level = 0;  // level at which the cell first became active
};

struct HangingHost {
  int element = -1;  // element (at this level) whose entity contains the node
  int entity = -1;   // index into ReferenceElement::boundary_entities()
  int depth = 0;
  Point xi{};        // node position in the host's reference coordinates
};

class MeshLevel {
 public:
  FeFamily family;
  int index = 0;
  int max_depth = 0;
  int nodes_per_element = 0;

  std::vector<Point> coords;
  std::vector<LevelElement> elements;
  std::vector<int> element_nodes;  // flat, nodes_per_element per element

  std::vector<NodeTag> tags;
  std::vector<std::uint8_t> boundary;
  std::vector<std::uint8_t> dirichlet;

  std::vector<int> host_offsets;  // size num_nodes()+1
  std::vector<HangingHost> hosts;
  std::vector<int> designated;    // index into hosts, -1 if not hanging

  std::vector<int> incidence_offsets;
  std::vector<int> incidence;

  int num_nodes() const { return static_cast<int>(coords.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int dim() const { return shape_dim(family.shape); }

  std::span<const int> nodes_of(int e) const {
    return {element_nodes.data() + static_cast<std::size_t>(e) * nodes_per_element,
            static_cast<std::size_t>(nodes_per_element)};
  }
  std::span<const HangingHost> hosts_of(int n) const {
    return {hosts.data() + host_offsets[n], static_cast<std::size_t>(host_offsets[n + 1] - host_offsets[n])};
  }
  std::span<const int> elements_of(int n) const {
    return {incidence.data() + incidence_offsets[n],
            static_cast<std::size_t>(incidence_offsets[n + 1] - incidence_offsets[n])};
  }
  const HangingHost* designated_host(int n) const { return designated[n] < 0 ? nullptr : &hosts[designated[n]]; }
  bool is_hanging(int n) const { return tags[n] == NodeTag::Hanging; }

  // Vertex coordinates of element e (first vertices of its node list).
  void element_vertices(int e, Point* out) const;
  Point centroid(int e) const;
  double volume(int e) const;
  double total_volume() const;

  // Hanging or Dirichlet.
  std::vector<std::uint8_t> constrained_mask() const;
  int count(NodeTag t) const;
  int count_dirichlet() const;
  // Local index of node n inside element e, or -1.
  int local_index(int e, int n) const;
};

class HierarchicalMesh {
 public:
  // Validates connectivity and geometry and builds level 0.
  explicit HierarchicalMesh(const CoarseMesh& coarse);

  FeFamily family() const { return family_; }
  int num_levels() const { return static_cast<int>(levels_.size()); }
  const MeshLevel& level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
  const MeshLevel& finest() const { return levels_.back(); }
  const std::vector<std::vector<int>>& markers() const { return markers_; }

  // Refines the marked elements of the finest level, producing a new level.
  const MeshLevel& refine(const std::vector<int>& marked);

  // Node index (valid at every level containing the node) or -1.
  int find_node(const Point& x) const { return locator_.find(x); }

 private:
  struct Cell {
    int parent = -1;
    int first_child = -1;
    int depth = 0;
    int created_level = 0;
    std::uint8_t boundary_mask = 0;  // bit f set when facet f lies on the domain boundary
  };

  int register_node(const Point& x);
  void finalize_level(MeshLevel& lvl) const;
  void detect_hanging(MeshLevel& lvl) const;

  FeFamily family_;
  ReferenceElement ref_;
  GeometryMap geo_;
  NodeLocator locator_;
  std::vector<Point> coords_;
  std::vector<Cell> cells_;
  std::vector<MeshLevel> levels_;
  std::vector<std::vector<int>> markers_;
};

}  // namespace hmg
