#include "hmg/reference_element.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hmg {

int shape_dim(Shape s) { return s == Shape::Hex ? 3 : 2; }

int shape_vertex_count(Shape s) {
  switch (s) {
    case Shape::Quad: return 4;
    case Shape::Tri: return 3;
    case Shape::Hex: return 8;
  }
  return 0;
}

int family_node_count(FeFamily f) {
  if (f.degree != 1 && f.degree != 2) throw std::invalid_argument("unsupported degree");
  switch (f.shape) {
    case Shape::Quad: return f.degree == 1 ? 4 : 9;
    case Shape::Tri: return f.degree == 1 ? 3 : 6;
    case Shape::Hex: return f.degree == 1 ? 8 : 27;
  }
  return 0;
}

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::Quad: return "quad";
    case Shape::Tri: return "tri";
    case Shape::Hex: return "hex";
  }
  return "?";
}

Shape parse_shape(const std::string& name) {
  if (name == "quad") return Shape::Quad;
  if (name == "tri") return Shape::Tri;
  if (name == "hex") return Shape::Hex;
  throw std::invalid_argument("unknown shape '" + name + "'");
}

std::string family_name(FeFamily f) {
  switch (f.shape) {
    case Shape::Quad: return f.degree == 1 ? "q1" : "q2";
    case Shape::Tri: return f.degree == 1 ? "p1" : "p2";
    case Shape::Hex: return f.degree == 1 ? "hex1" : "hex2";
  }
  return "?";
}

FeFamily parse_family(const std::string& name) {
  if (name == "q1" || name == "bilinear") return {Shape::Quad, 1};
  if (name == "q2" || name == "biquadratic") return {Shape::Quad, 2};
  if (name == "p1" || name == "linear") return {Shape::Tri, 1};
  if (name == "p2" || name == "quadratic") return {Shape::Tri, 2};
  if (name == "hex1" || name == "trilinear") return {Shape::Hex, 1};
  if (name == "hex2" || name == "triquadratic") return {Shape::Hex, 2};
  throw std::invalid_argument("unknown element family '" + name + "'");
}

// ---------------------------------------------------------------------------
// Quadrature

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      const double pn = (n == 1) ? z : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (z * pn - pnm1) / (z * z - 1.0);
      const double dz = pn / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute derivative at the converged root for the weight.
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pn = (n == 1) ? z : p1;
    const double pnm1 = (n == 1) ? 1.0 : p0;
    dp = n * (z * pn - pnm1) / (z * z - 1.0);
    x[n - 1 - i] = z;
    w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

QuadratureRule tensor_gauss(Shape s, int n) {
  if (s == Shape::Tri) throw std::invalid_argument("tensor_gauss: triangles need triangle_rule");
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule q;
  const int nz = (s == Shape::Hex) ? n : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        q.points.push_back({x[i], x[j], s == Shape::Hex ? x[k] : 0.0});
        q.weights.push_back(w[i] * w[j] * (s == Shape::Hex ? w[k] : 1.0));
      }
  return q;
}

QuadratureRule triangle_rule(int degree) {
  QuadratureRule q;
  if (degree <= 1) {
    q.points = {{1.0 / 3.0, 1.0 / 3.0, 0.0}};
    q.weights = {0.5};
  } else if (degree == 2) {
    const double a = 1.0 / 6.0, b = 2.0 / 3.0;
    q.points = {{a, a, 0.0}, {b, a, 0.0}, {a, b, 0.0}};
    q.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  } else if (degree <= 4) {
    // Six-point symmetric rule, exact to degree 4.
    const double a = 0.445948490915965, wa = 0.223381589678011 / 2.0;
    const double b = 0.091576213509771, wb = 0.109951743655322 / 2.0;
    q.points = {{a, a, 0.0}, {1.0 - 2.0 * a, a, 0.0}, {a, 1.0 - 2.0 * a, 0.0},
                {b, b, 0.0}, {1.0 - 2.0 * b, b, 0.0}, {b, 1.0 - 2.0 * b, 0.0}};
    q.weights = {wa, wa, wa, wb, wb, wb};
  } else {
    throw std::invalid_argument("triangle_rule: degree > 4 not available");
  }
  return q;
}

QuadratureRule default_quadrature(FeFamily f) {
  if (f.shape == Shape::Tri) return triangle_rule(2 * f.degree);
  return tensor_gauss(f.shape, f.degree + 1);
}

// ---------------------------------------------------------------------------
// Reference cells

namespace {

const std::vector<Point>& vertices_of(Shape s) {
  static const std::vector<Point> quad = {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}};
  static const std::vector<Point> tri = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  static const std::vector<Point> hex = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                                         {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};
  switch (s) {
    case Shape::Quad: return quad;
    case Shape::Tri: return tri;
    case Shape::Hex: return hex;
  }
  return quad;
}

const std::vector<std::array<int, 2>>& edges_of(Shape s) {
  static const std::vector<std::array<int, 2>> quad = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  static const std::vector<std::array<int, 2>> tri = {{0, 1}, {1, 2}, {2, 0}};
  static const std::vector<std::array<int, 2>> hex = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                                     {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  switch (s) {
    case Shape::Quad: return quad;
    case Shape::Tri: return tri;
    case Shape::Hex: return hex;
  }
  return quad;
}

const std::vector<std::array<int, 4>>& hex_faces() {
  static const std::vector<std::array<int, 4>> faces = {{0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6},
                                                       {3, 0, 4, 7}, {0, 1, 2, 3}, {4, 5, 6, 7}};
  return faces;
}

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Point mid(const Point& a, const Point& b) { return {(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2}; }
double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline void lagrange1d(int degree, double t, double* l, double* dl) {
  if (degree == 1) {
    l[0] = 0.5 * (1.0 - t);
    l[1] = 0.5 * (1.0 + t);
    dl[0] = -0.5;
    dl[1] = 0.5;
  } else {
    l[0] = 0.5 * t * (t - 1.0);
    l[1] = 1.0 - t * t;
    l[2] = 0.5 * t * (t + 1.0);
    dl[0] = t - 0.5;
    dl[1] = -2.0 * t;
    dl[2] = t + 0.5;
  }
}

}  // namespace

ReferenceElement::ReferenceElement(FeFamily f) : family_(f), dim_(shape_dim(f.shape)) {
  family_node_count(f);  // validates degree
  const auto& verts = vertices_of(f.shape);
  const auto& edges = edges_of(f.shape);
  nodes_ = verts;
  if (f.degree == 2) {
    for (const auto& e : edges) nodes_.push_back(mid(verts[e[0]], verts[e[1]]));
    if (f.shape == Shape::Quad) nodes_.push_back({0, 0, 0});
    if (f.shape == Shape::Hex) {
      for (const auto& fc : hex_faces()) nodes_.push_back(mid(verts[fc[0]], verts[fc[2]]));
      nodes_.push_back({0, 0, 0});
    }
  }
  if (f.shape != Shape::Tri) {
    tensor_index_.resize(nodes_.size());
    for (std::size_t n = 0; n < nodes_.size(); ++n)
      for (int d = 0; d < 3; ++d) {
        const double c = nodes_[n][d];
        int idx = 0;
        if (f.degree == 1) idx = c > 0 ? 1 : 0;
        else idx = c < -0.5 ? 0 : (c > 0.5 ? 2 : 1);
        tensor_index_[n][d] = idx;
      }
  }

  auto make_edge = [&](int a, int b) {
    Entity e;
    e.dim = 1;
    e.origin = verts[a];
    e.u = sub(verts[b], verts[a]);
    e.vertices = {a, b};
    return e;
  };
  if (dim_ == 2) {
    for (const auto& e : edges) facets_.push_back(make_edge(e[0], e[1]));
    boundary_entities_ = facets_;
  } else {
    for (const auto& fc : hex_faces()) {
      Entity e;
      e.dim = 2;
      e.origin = verts[fc[0]];
      e.u = sub(verts[fc[1]], verts[fc[0]]);
      e.v = sub(verts[fc[3]], verts[fc[0]]);
      e.vertices = {fc[0], fc[1], fc[2], fc[3]};
      facets_.push_back(e);
    }
    boundary_entities_ = facets_;
    for (const auto& e : edges) boundary_entities_.push_back(make_edge(e[0], e[1]));
  }
}

double ReferenceElement::measure() const {
  switch (family_.shape) {
    case Shape::Quad: return 4.0;
    case Shape::Tri: return 0.5;
    case Shape::Hex: return 8.0;
  }
  return 0.0;
}

bool ReferenceElement::contains(const Point& xi, double tol) const {
  if (family_.shape == Shape::Tri)
    return xi[0] >= -tol && xi[1] >= -tol && xi[0] + xi[1] <= 1.0 + tol && std::abs(xi[2]) <= tol;
  for (int d = 0; d < 3; ++d) {
    if (d < dim_) {
      if (xi[d] < -1.0 - tol || xi[d] > 1.0 + tol) return false;
    } else if (std::abs(xi[d]) > tol) {
      return false;
    }
  }
  return true;
}

void ReferenceElement::shape_eval(const Point& xi, std::vector<double>& vals, std::vector<double>& grads) const {
  if (!contains(xi, 1e-12)) throw std::domain_error("shape_eval: point outside the reference element");
  vals.resize(nodes_.size());
  grads.resize(3 * nodes_.size());
  values(xi, vals.data());
  gradients(xi, grads.data());
}

void ReferenceElement::values(const Point& xi, double* out) const {
  if (family_.shape == Shape::Tri) {
    const double l0 = 1.0 - xi[0] - xi[1], l1 = xi[0], l2 = xi[1];
    if (family_.degree == 1) {
      out[0] = l0;
      out[1] = l1;
      out[2] = l2;
    } else {
      out[0] = l0 * (2 * l0 - 1);
      out[1] = l1 * (2 * l1 - 1);
      out[2] = l2 * (2 * l2 - 1);
      out[3] = 4 * l0 * l1;
      out[4] = 4 * l1 * l2;
      out[5] = 4 * l2 * l0;
    }
    return;
  }
  double l[3][3], dl[3][3];
  for (int d = 0; d < dim_; ++d) lagrange1d(family_.degree, xi[d], l[d], dl[d]);
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    double v = 1.0;
    for (int d = 0; d < dim_; ++d) v *= l[d][tensor_index_[n][d]];
    out[n] = v;
  }
}

void ReferenceElement::gradients(const Point& xi, double* out) const {
  if (family_.shape == Shape::Tri) {
    const double l0 = 1.0 - xi[0] - xi[1], l1 = xi[0], l2 = xi[1];
    // d(l0,l1,l2)/dx = (-1,1,0), /dy = (-1,0,1)
    auto set = [&](int n, double gx, double gy) {
      out[3 * n] = gx;
      out[3 * n + 1] = gy;
      out[3 * n + 2] = 0.0;
    };
    if (family_.degree == 1) {
      set(0, -1, -1);
      set(1, 1, 0);
      set(2, 0, 1);
    } else {
      const double d0 = 4 * l0 - 1, d1 = 4 * l1 - 1, d2 = 4 * l2 - 1;
      set(0, -d0, -d0);
      set(1, d1, 0);
      set(2, 0, d2);
      set(3, 4 * (l0 - l1), -4 * l1);
      set(4, 4 * l2, 4 * l1);
      set(5, -4 * l2, 4 * (l0 - l2));
    }
    return;
  }
  double l[3][3], dl[3][3];
  for (int d = 0; d < dim_; ++d) lagrange1d(family_.degree, xi[d], l[d], dl[d]);
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const auto& ti = tensor_index_[n];
    for (int g = 0; g < 3; ++g) {
      if (g >= dim_) {
        out[3 * n + g] = 0.0;
        continue;
      }
      double v = 1.0;
      for (int d = 0; d < dim_; ++d) v *= (d == g) ? dl[d][ti[d]] : l[d][ti[d]];
      out[3 * n + g] = v;
    }
  }
}

bool ReferenceElement::on_entity(const Entity& e, const Point& xi, double tol, double* s_out, double* t_out) const {
  const Point r = sub(xi, e.origin);
  const double s = dot(r, e.u) / dot(e.u, e.u);
  double t = 0.0;
  Point proj = {e.origin[0] + s * e.u[0], e.origin[1] + s * e.u[1], e.origin[2] + s * e.u[2]};
  if (e.dim == 2) {
    t = dot(r, e.v) / dot(e.v, e.v);
    for (int d = 0; d < 3; ++d) proj[d] += t * e.v[d];
  }
  const Point diff = sub(xi, proj);
  if (std::sqrt(dot(diff, diff)) > tol) return false;
  if (s < -tol || s > 1.0 + tol) return false;
  if (e.dim == 2 && (t < -tol || t > 1.0 + tol)) return false;
  if (s_out) *s_out = s;
  if (t_out) *t_out = t;
  return true;
}

int ReferenceElement::num_children() const {
  switch (family_.shape) {
    case Shape::Quad: return 4;
    case Shape::Tri: return 4;
    case Shape::Hex: return 8;
  }
  return 0;
}

Point ReferenceElement::to_parent(int c, const Point& xi) const {
  if (family_.shape == Shape::Tri) {
    static const std::array<std::array<Point, 3>, 4> kids = {{
        {{{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0}}},
        {{{0.5, 0, 0}, {1, 0, 0}, {0.5, 0.5, 0}}},
        {{{0, 0.5, 0}, {0.5, 0.5, 0}, {0, 1, 0}}},
        {{{0.5, 0, 0}, {0.5, 0.5, 0}, {0, 0.5, 0}}},
    }};
    const auto& k = kids.at(c);
    Point p{};
    for (int d = 0; d < 2; ++d) p[d] = k[0][d] + xi[0] * (k[1][d] - k[0][d]) + xi[1] * (k[2][d] - k[0][d]);
    return p;
  }
  const Point& corner = vertices_of(family_.shape).at(c);
  Point p{};
  for (int d = 0; d < dim_; ++d) {
    const double lo = corner[d] < 0 ? -1.0 : 0.0;
    p[d] = lo + 0.5 * (xi[d] + 1.0);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Geometry

GeometryMap::GeometryMap(Shape s) : lin_(FeFamily{s, 1}) {}

Point GeometryMap::map(const Point* verts, const Point& xi) const {
  double n[8];
  lin_.values(xi, n);
  Point x{0, 0, 0};
  for (int v = 0; v < lin_.num_nodes(); ++v)
    for (int d = 0; d < 3; ++d) x[d] += n[v] * verts[v][d];
  return x;
}

double GeometryMap::jacobian(const Point* verts, const Point& xi, std::array<double, 9>& jac) const {
  double g[24];
  lin_.gradients(xi, g);
  jac.fill(0.0);
  const int dim = lin_.dim();
  for (int v = 0; v < lin_.num_nodes(); ++v)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) jac[3 * i + j] += verts[v][i] * g[3 * v + j];
  if (dim == 2) return jac[0] * jac[4] - jac[1] * jac[3];
  return jac[0] * (jac[4] * jac[8] - jac[5] * jac[7]) - jac[1] * (jac[3] * jac[8] - jac[5] * jac[6]) +
         jac[2] * (jac[3] * jac[7] - jac[4] * jac[6]);
}

void invert_jacobian(int dim, const std::array<double, 9>& j, double det, std::array<double, 9>& it) {
  it.fill(0.0);
  if (dim == 2) {
    // inverse = [j4 -j1; -j3 j0]/det, transposed
    it[0] = j[4] / det;
    it[1] = -j[3] / det;
    it[3] = -j[1] / det;
    it[4] = j[0] / det;
    return;
  }
  // cofactor matrix equals det * inverse transpose
  it[0] = (j[4] * j[8] - j[5] * j[7]) / det;
  it[1] = -(j[3] * j[8] - j[5] * j[6]) / det;
  it[2] = (j[3] * j[7] - j[4] * j[6]) / det;
  it[3] = -(j[1] * j[8] - j[2] * j[7]) / det;
  it[4] = (j[0] * j[8] - j[2] * j[6]) / det;
  it[5] = -(j[0] * j[7] - j[1] * j[6]) / det;
  it[6] = (j[1] * j[5] - j[2] * j[4]) / det;
  it[7] = -(j[0] * j[5] - j[2] * j[3]) / det;
  it[8] = (j[0] * j[4] - j[1] * j[3]) / det;
}

bool GeometryMap::inverse(const Point* verts, const Point& x, Point& xi, double tol) const {
  const int dim = lin_.dim();
  xi = (lin_.shape() == Shape::Tri) ? Point{1.0 / 3.0, 1.0 / 3.0, 0.0} : Point{0, 0, 0};
  double scale = 0.0;
  for (int v = 1; v < lin_.num_nodes(); ++v) {
    const Point d = sub(verts[v], verts[0]);
    scale = std::max(scale, std::sqrt(dot(d, d)));
  }
  for (int it = 0; it < 50; ++it) {
    const Point fx = map(verts, xi);
    std::array<double, 9> jac, inv_t;
    const double det = jacobian(verts, xi, jac);
    if (det == 0.0) return false;
    invert_jacobian(dim, jac, det, inv_t);
    // delta = J^{-1} (x - F(xi)); J^{-1}[i][k] = inv_t[k][i]
    double step = 0.0;
    Point delta{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
      for (int k = 0; k < dim; ++k) delta[i] += inv_t[3 * k + i] * (x[k] - fx[k]);
      step = std::max(step, std::abs(delta[i]));
    }
    for (int i = 0; i < dim; ++i) xi[i] += delta[i];
    if (step < tol) {
      const Point fx2 = map(verts, xi);
      const Point r = sub(fx2, x);
      return std::sqrt(dot(r, r)) <= 1e-10 * std::max(scale, 1e-300);
    }
  }
  return false;
}

}  // namespace hmg
