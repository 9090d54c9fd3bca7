#include "doctest.h"
#include "fixtures.hpp"
#include "hmg/assembly.hpp"
#include "hmg/constraints.hpp"
#include "hmg/multigrid.hpp"
#include "hmg/transfer.hpp"

using namespace hmg;
using namespace fixtures;

namespace {

const auto one = [](const Point&) { return 1.0; };

// Constrained operator assembled directly on a level.
CsrMatrix direct_operator(const MeshLevel& l) {
  const SystemPair s = assemble_poisson(l, one);
  return constrain_operator(s.A, assemble_Rhat(l), l.constrained_mask());
}

double rel_diff(const CsrMatrix& a, const CsrMatrix& b) { return max_abs_diff(a, b) / max_abs(b); }

}  // namespace

TEST_CASE("prolongation interpolates coarse polynomials exactly") {
  for (const FeFamily f : {kQ1, kQ2, kP1, kP2, kHex1, kHex2}) {
    CAPTURE(family_name(f));
    const HierarchicalMesh m = planned_mesh(f, Strategy::Quadrant, f.shape == Shape::Hex ? 2 : 3);
    for (int k = 1; k < m.num_levels(); ++k) {
      const MeshLevel& c = m.level(k - 1);
      const MeshLevel& fi = m.level(k);
      const CsrMatrix q = build_Q(c, fi);
      auto poly = [&](const Point& p) {
        return f.degree == 1 ? 1 + 2 * p[0] - p[1] + 0.5 * p[2] : p[0] * p[0] - 3 * p[0] * p[1] + p[2] + 2;
      };
      Vector uc(c.num_nodes()), uf(fi.num_nodes());
      for (int n = 0; n < c.num_nodes(); ++n) uc[n] = poly(c.coords[n]);
      for (int n = 0; n < fi.num_nodes(); ++n) uf[n] = poly(fi.coords[n]);
      CHECK((q * uc - uf).cwiseAbs().maxCoeff() < 1e-12);
      // coarse nodes are carried over by unit rows
      for (int n = 0; n < c.num_nodes(); ++n) CHECK(q.coeff(n, n) == 1.0);
    }
  }
}

TEST_CASE("constrained prolongation has empty rows and columns on constrained nodes") {
  const HierarchicalMesh m = planned_mesh(kQ2, Strategy::Circle, 4);
  for (int k = 1; k < m.num_levels(); ++k) {
    const MeshLevel& c = m.level(k - 1);
    const MeshLevel& fi = m.level(k);
    const CsrMatrix qh = build_Qhat(build_Q(c, fi), assemble_Rhat(c), c, fi);
    const Mask fc = fi.constrained_mask();
    const CsrMatrix qt = transpose(qh);
    for (int r = 0; r < qh.rows(); ++r) {
      double s = 0;
      for (CsrMatrix::InnerIterator it(qh, r); it; ++it) s += std::abs(it.value());
      if (fc[r]) CHECK(s == 0.0);
    }
    for (int col = 0; col < qt.rows(); ++col) {
      if (!c.dirichlet[col]) continue;
      double s = 0;
      for (CsrMatrix::InnerIterator it(qt, col); it; ++it) s += std::abs(it.value());
      CHECK(s == 0.0);
    }
  }
}

TEST_CASE("Galerkin coarse operators equal the directly discretised coarse operators") {
  struct Case {
    FeFamily f;
    Strategy s;
    int levels;
  };
  const Case cases[] = {
      {kQ1, Strategy::Uniform, 3},  {kQ1, Strategy::Quadrant, 5}, {kQ1, Strategy::Circle, 5},
      {kQ1, Strategy::Random, 5},   {kQ2, Strategy::Quadrant, 4}, {kQ2, Strategy::Random, 4},
      {kP1, Strategy::Circle, 5},   {kP1, Strategy::RandomActive, 4}, {kP2, Strategy::Quadrant, 4},
      {kP2, Strategy::Random, 4},   {kHex1, Strategy::Quadrant, 2}, {kHex2, Strategy::Quadrant, 2},
      {kQ2, Strategy::RandomActive, 4},
  };
  for (const Case& c : cases) {
    CAPTURE(family_name(c.f));
    CAPTURE(strategy_name(c.s));
    const HierarchicalMesh m = planned_mesh(c.f, c.s, c.levels, 5);
    const int top = m.num_levels() - 1;
    const MgHierarchy h = MgHierarchy::build(m, top, assemble_poisson(m.level(top), one), MgOptions{});
    for (int k = 0; k <= top; ++k) {
      CAPTURE(k);
      CHECK(rel_diff(h.level(k).A, direct_operator(m.level(k))) < 1e-10);
    }
  }
}

TEST_CASE("constrained right-hand side vanishes on constrained nodes and conserves the load") {
  const HierarchicalMesh m = planned_mesh(kP2, Strategy::Circle, 4);
  const MeshLevel& l = m.finest();
  const SystemPair s = assemble_poisson(l, one);
  const CsrMatrix r = assemble_Rhat(l);
  const Vector fh = constrain_rhs(r, s.f, l.constrained_mask());
  const Mask cons = l.constrained_mask();
  for (int n = 0; n < l.num_nodes(); ++n)
    if (cons[n]) CHECK(fh[n] == 0.0);
  // hanging columns of R-hat sum to one, so redistributing the load keeps its total, the area
  Vector raw = Vector::Zero(l.num_nodes());
  std::vector<double> ke, fe;
  for (int e = 0; e < l.num_elements(); ++e) {
    element_poisson(l, e, default_quadrature(l.family), one, ke, fe);
    const auto nodes = l.nodes_of(e);
    for (std::size_t i = 0; i < nodes.size(); ++i) raw[nodes[i]] += fe[i];
  }
  const Vector full = constrain_rhs(r, raw, Mask(l.num_nodes(), 0));
  CHECK(full.sum() == doctest::Approx(l.total_volume()).epsilon(1e-12));
}

TEST_CASE("operators on every level are symmetric with unit diagonal on constrained nodes") {
  const HierarchicalMesh m = planned_mesh(kQ1, Strategy::Random, 5, 3);
  const int top = m.num_levels() - 1;
  const MgHierarchy h = MgHierarchy::build(m, top, assemble_poisson(m.level(top), one), MgOptions{});
  for (int k = 0; k <= top; ++k) {
    const MgLevel& lv = h.level(k);
    CHECK(symmetry_defect(lv.A) < 1e-13);
    for (int n = 0; n < lv.A.rows(); ++n)
      if (lv.constrained[n]) CHECK(lv.A.coeff(n, n) == 1.0);
    if (k > 0) {
      CHECK(lv.P.rows() == lv.A.rows());
      CHECK(lv.P.cols() == h.level(k - 1).A.rows());
      CHECK(max_abs_diff(lv.Pt, transpose(lv.P)) == 0.0);
    }
  }
}

TEST_CASE("coarse operators are exactly symmetric in pattern and value") {
  // this biquadratic mesh produces products that cancel to zero on one side only
  const HierarchicalMesh m = planned_mesh(kQ2, Strategy::Circle, 5);
  const int top = m.num_levels() - 1;
  const MgHierarchy h = MgHierarchy::build(m, top, assemble_poisson(m.level(top), one), MgOptions{});
  for (int k = 0; k < top; ++k) {
    CAPTURE(k);
    const CsrMatrix& a = h.level(k).A;
    const CsrMatrix t = transpose(a);
    CHECK(a.nonZeros() == t.nonZeros());
    CHECK(max_abs_diff(a, t) == 0.0);
    bool same_pattern = true;
    for (int r = 0; r < a.rows(); ++r) {
      CsrMatrix::InnerIterator x(a, r), y(t, r);
      for (; x && y; ++x, ++y) same_pattern &= x.col() == y.col();
      same_pattern &= !x && !y;
    }
    CHECK(same_pattern);
  }
}
