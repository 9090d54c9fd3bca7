#pragma once

#include <array>
#include <string>
#include <vector>

namespace hmg {

enum class Shape { Quad, Tri, Hex };

using Point = std::array<double, 3>;

struct FeFamily {
  Shape shape = Shape::Quad;
  int degree = 1;
  friend bool operator==(const FeFamily&, const FeFamily&) = default;
};

int shape_dim(Shape s);
int shape_vertex_count(Shape s);
int family_node_count(FeFamily f);
std::string shape_name(Shape s);
Shape parse_shape(const std::string& name);

// Short names: q1, q2, p1, p2, hex1, hex2. Long names are accepted by parse_family:
// bilinear, biquadratic, linear, quadratic (P2 triangles), trilinear, triquadratic.
std::string family_name(FeFamily f);
FeFamily parse_family(const std::string& name);

// A boundary entity of the reference cell parameterized as origin + s*u (+ t*v), s,t in [0,1].
struct Entity {
  int dim = 1;
  Point origin{};
  Point u{};
  Point v{};
  std::vector<int> vertices;
};

struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
};

// Gauss–Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Tensor Gauss rule with n points per direction (quad/hex) or the symmetric
// triangle rule of the requested polynomial degree (tri, degree <= 4).
QuadratureRule tensor_gauss(Shape s, int n);
QuadratureRule triangle_rule(int degree);
// Default rule for a family.
QuadratureRule default_quadrature(FeFamily f);

class ReferenceElement {
 public:
  explicit ReferenceElement(FeFamily f);

  FeFamily family() const { return family_; }
  Shape shape() const { return family_.shape; }
  int dim() const { return dim_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_vertices() const { return shape_vertex_count(family_.shape); }
  const std::vector<Point>& nodes() const { return nodes_; }
  double measure() const;

  bool contains(const Point& xi, double tol = 1e-12) const;

  // Checked evaluation; throws std::domain_error for points outside the cell.
  void shape_eval(const Point& xi, std::vector<double>& values, std::vector<double>& grads) const;

  // Unchecked evaluation. `values` has num_nodes() entries; `grads` has 3*num_nodes().
  void values(const Point& xi, double* out) const;
  void gradients(const Point& xi, double* out) const;

  // Codimension-one entities.
  const std::vector<Entity>& facets() const { return facets_; }
  // Facets followed by edges (3D only); edges in 2D.
  const std::vector<Entity>& boundary_entities() const { return boundary_entities_; }

  // Parameters (s, t) of xi on the entity, if xi lies on it within tol.
  bool on_entity(const Entity& e, const Point& xi, double tol, double* s = nullptr, double* t = nullptr) const;

  int num_children() const;
  // Maps a point from the reference coordinates of child `c` to the parent's.
  Point to_parent(int c, const Point& xi) const;

 private:
  FeFamily family_;
  int dim_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 3>> tensor_index_;
  std::vector<Entity> facets_;
  std::vector<Entity> boundary_entities_;
};

// Geometry through the vertex (degree one) map of a cell.
class GeometryMap {
 public:
  explicit GeometryMap(Shape s);
  Shape shape() const { return lin_.shape(); }
  const ReferenceElement& linear() const { return lin_; }

  Point map(const Point* verts, const Point& xi) const;
  // Jacobian dx/dxi (row-major dim x dim in a 3x3 array) and determinant.
  double jacobian(const Point* verts, const Point& xi, std::array<double, 9>& jac) const;
  // Newton inverse of the vertex map. Returns false if it fails to converge.
  bool inverse(const Point* verts, const Point& x, Point& xi, double tol = 1e-13) const;

 private:
  ReferenceElement lin_;
};

// Inverse transpose of a dim x dim Jacobian stored in a 3x3 array.
void invert_jacobian(int dim, const std::array<double, 9>& jac, double det, std::array<double, 9>& inv_t);

}  // namespace hmg
