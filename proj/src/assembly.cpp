#include "hmg/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hmg {

namespace {

struct ElementKernel {
  ReferenceElement ref;
  GeometryMap geo;
  const QuadratureRule& q;
  std::vector<std::vector<double>> vals;   // per quadrature point
  std::vector<std::vector<double>> grads;  // per quadrature point, 3 per node

  ElementKernel(FeFamily fam, const QuadratureRule& rule) : ref(fam), geo(fam.shape), q(rule) {
    vals.resize(q.points.size());
    grads.resize(q.points.size());
    for (std::size_t p = 0; p < q.points.size(); ++p) {
      vals[p].resize(ref.num_nodes());
      grads[p].resize(3 * ref.num_nodes());
      ref.values(q.points[p], vals[p].data());
      ref.gradients(q.points[p], grads[p].data());
    }
  }

  void compute(const MeshLevel& lvl, int e, const SourceFunction* f, std::vector<double>& ke,
               std::vector<double>* fe) const {
    const int n = ref.num_nodes();
    const int dim = ref.dim();
    Point verts[8];
    lvl.element_vertices(e, verts);
    ke.assign(static_cast<std::size_t>(n) * n, 0.0);
    if (fe) fe->assign(n, 0.0);
    std::vector<double> pg(3 * n);
    for (std::size_t p = 0; p < q.points.size(); ++p) {
      std::array<double, 9> jac, it;
      const double det = geo.jacobian(verts, q.points[p], jac);
      if (!(det > 0.0))
        throw std::runtime_error("assemble_poisson: singular or inverted Jacobian in element " + std::to_string(e));
      invert_jacobian(dim, jac, det, it);
      const double w = q.weights[p] * det;
      const auto& g = grads[p];
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < dim; ++a) {
          double s = 0.0;
          for (int b = 0; b < dim; ++b) s += it[3 * a + b] * g[3 * i + b];
          pg[3 * i + a] = s;
        }
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int a = 0; a < dim; ++a) s += pg[3 * i + a] * pg[3 * j + a];
          ke[i * n + j] += w * s;
        }
      if (fe && f) {
        const double fx = (*f)(geo.map(verts, q.points[p]));
        for (int i = 0; i < n; ++i) (*fe)[i] += w * fx * vals[p][i];
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) ke[i * n + j] = ke[j * n + i];
  }
};

}  // namespace

void element_poisson(const MeshLevel& lvl, int e, const QuadratureRule& q, const SourceFunction& f,
                     std::vector<double>& ke, std::vector<double>& fe) {
  const ElementKernel k(lvl.family, q);
  k.compute(lvl, e, &f, ke, &fe);
}

CsrMatrix assemble_stiffness(const MeshLevel& lvl, const QuadratureRule& q) {
  const ElementKernel k(lvl.family, q);
  const int n = lvl.nodes_per_element;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(lvl.num_elements()) * n * n);
  std::vector<double> ke;
  for (int e = 0; e < lvl.num_elements(); ++e) {
    k.compute(lvl, e, nullptr, ke, nullptr);
    const auto nodes = lvl.nodes_of(e);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) trip.emplace_back(nodes[i], nodes[j], ke[i * n + j]);
  }
  return csr_from_triplets(lvl.num_nodes(), lvl.num_nodes(), trip);
}

SystemPair assemble_poisson(const MeshLevel& lvl, const SourceFunction& f) {
  return assemble_poisson(lvl, f, default_quadrature(lvl.family));
}

SystemPair assemble_poisson(const MeshLevel& lvl, const SourceFunction& f, const QuadratureRule& q) {
  const ElementKernel k(lvl.family, q);
  const int n = lvl.nodes_per_element;
  const int nn = lvl.num_nodes();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(lvl.num_elements()) * n * n);
  SystemPair sys;
  sys.f = Vector::Zero(nn);
  std::vector<double> ke, fe;
  for (int e = 0; e < lvl.num_elements(); ++e) {
    k.compute(lvl, e, &f, ke, &fe);
    const auto nodes = lvl.nodes_of(e);
    for (int i = 0; i < n; ++i) {
      sys.f[nodes[i]] += fe[i];
      for (int j = 0; j < n; ++j) trip.emplace_back(nodes[i], nodes[j], ke[i * n + j]);
    }
  }
  sys.dirichlet = lvl.dirichlet;
  const CsrMatrix a = csr_from_triplets(nn, nn, trip);
  sys.A = constrain_unit_diagonal(a, sys.dirichlet);
  for (int i = 0; i < nn; ++i)
    if (sys.dirichlet[i]) sys.f[i] = 0.0;
  return sys;
}

Vector residual(const CsrMatrix& A, const Vector& f, const Vector& u) {
  if (A.rows() != f.size() || A.cols() != u.size())
    throw std::invalid_argument("residual: size mismatch (A is " + std::to_string(A.rows()) + "x" +
                                std::to_string(A.cols()) + ", f has " + std::to_string(f.size()) + ", u has " +
                                std::to_string(u.size()) + ")");
  return f - A * u;
}

}  // namespace hmg
