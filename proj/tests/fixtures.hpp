#pragma once

// Meshes and dense oracles shared by the unit and acceptance tests.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hmg/markers.hpp"
#include "hmg/mesh.hpp"
#include "hmg/reference_element.hpp"
#include "hmg/sparse.hpp"

namespace fixtures {

using hmg::CoarseMesh;
using hmg::DenseMatrix;
using hmg::FeFamily;
using hmg::HierarchicalMesh;
using hmg::MeshLevel;
using hmg::Point;
using hmg::Shape;

inline const FeFamily kQ1{Shape::Quad, 1};
inline const FeFamily kQ2{Shape::Quad, 2};
inline const FeFamily kP1{Shape::Tri, 1};
inline const FeFamily kP2{Shape::Tri, 2};
inline const FeFamily kHex1{Shape::Hex, 1};
inline const FeFamily kHex2{Shape::Hex, 2};

inline double dist(const Point& a, const Point& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

// Active element whose vertex average is c.
inline int element_at(const MeshLevel& lvl, const Point& c) {
  for (int e = 0; e < lvl.num_elements(); ++e)
    if (dist(lvl.centroid(e), c) < 1e-12) return e;
  throw std::runtime_error("fixture: no element with the requested centroid");
}

inline int node_at(const HierarchicalMesh& m, const Point& x) {
  const int n = m.find_node(x);
  if (n < 0) throw std::runtime_error("fixture: node not found");
  return n;
}

// Three P1 triangles around the origin. The big one is refined, then its
// centre child, which leaves hanging nodes two generations deep on the
// edges shared with the unrefined neighbours.
inline HierarchicalMesh example_tri() {
  CoarseMesh c;
  c.dim = 2;
  c.family = kP1;
  c.vertices = {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {1, -1, 0}, {-1, 1, 0}};
  c.cells = {{0, 1, 2}, {0, 3, 1}, {0, 2, 4}};
  HierarchicalMesh m(c);
  m.refine({0});
  m.refine({element_at(m.finest(), {2.0 / 3.0, 2.0 / 3.0, 0})});
  return m;
}

// Hexahedral L shape with z in [0,1]: A = [-1,0]x[0,1] stays coarse,
// H2 = [-1,0]x[-1,0] and H3 = [0,1]x[-1,0] are refined once, and the two
// children of H3 along the line x = y = 0 are refined again.
inline HierarchicalMesh l_shape() {
  CoarseMesh c;
  c.dim = 3;
  c.family = kHex1;
  // grid points (x, y, z) with x in {-1,0,1}, y in {-1,0,1}, z in {0,1}
  auto id = [](int i, int j, int k) { return (k * 3 + j) * 3 + i; };
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) c.vertices.push_back({i - 1.0, j - 1.0, static_cast<double>(k)});
  auto hex = [&](int i, int j) {
    return std::vector<int>{id(i, j, 0),     id(i + 1, j, 0),     id(i + 1, j + 1, 0), id(i, j + 1, 0),
                            id(i, j, 1),     id(i + 1, j, 1),     id(i + 1, j + 1, 1), id(i, j + 1, 1)};
  };
  c.cells = {hex(0, 1), hex(0, 0), hex(1, 0)};
  // drop grid points not used by any cell (x=1, y=1)
  std::vector<int> remap(c.vertices.size(), -1);
  std::vector<Point> used;
  for (auto& cell : c.cells)
    for (int& v : cell) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(used.size());
        used.push_back(c.vertices[v]);
      }
      v = remap[v];
    }
  c.vertices = used;
  HierarchicalMesh m(c);
  m.refine({1, 2});
  const MeshLevel& l1 = m.finest();
  m.refine({element_at(l1, {0.25, -0.25, 0.25}), element_at(l1, {0.25, -0.25, 0.75})});
  return m;
}

// Hex configuration in which a hanging node hosted by a once-refined face also
// depends on a node hanging on a coarser edge.
inline HierarchicalMesh tstar_config() {
  HierarchicalMesh m(hmg::box_mesh(kHex1, 2, 2, 1, {0, 0, 0}, {2, 2, 1}));
  const MeshLevel& l0 = m.finest();
  m.refine({element_at(l0, {0.5, 1.5, 0.5}), element_at(l0, {1.5, 1.5, 0.5})});
  m.refine({element_at(m.finest(), {0.75, 1.25, 0.25})});
  return m;
}

inline CoarseMesh square_for(FeFamily f) {
  if (f.shape == Shape::Hex) return hmg::box_mesh(f, 2, 2, 2, {-1, -1, -1}, {1, 1, 1});
  return hmg::rectangle_mesh(f, 2, 2, -1.0, 1.0, -1.0, 1.0);
}

inline HierarchicalMesh planned_mesh(FeFamily f, hmg::Strategy s, int levels, std::uint64_t seed = 42) {
  HierarchicalMesh m(square_for(f));
  hmg::RefinementPlan p;
  p.strategy = s;
  p.levels = levels;
  p.seed = seed;
  hmg::apply_plan(m, p);
  return m;
}

inline DenseMatrix dense(const hmg::CsrMatrix& a) { return DenseMatrix(a); }

inline int dense_rank(const DenseMatrix& a, double rel = 1e-10) {
  Eigen::JacobiSVD<DenseMatrix> svd(a);
  const auto s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel * s[0]) ++r;
  return r;
}

}  // namespace fixtures
