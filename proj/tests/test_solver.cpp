#include <cmath>
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "hmg/assembly.hpp"
#include "hmg/krylov.hpp"
#include "hmg/multigrid.hpp"
#include "hmg/smoother.hpp"

using namespace hmg;
using namespace fixtures;

namespace {

const auto one = [](const Point&) { return 1.0; };

MgHierarchy hierarchy(const HierarchicalMesh& m, MgOptions o = {}) {
  const int top = m.num_levels() - 1;
  return MgHierarchy::build(m, top, assemble_poisson(m.level(top), one), o);
}

Vector random_free(const MgHierarchy& h, unsigned seed) {
  SplitMix64 rng(seed);
  Vector v(h.matrix().rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = h.constrained()[i] ? 0.0 : 2 * rng.uniform() - 1;
  return v;
}

// Dense symmetric positive definite tridiagonal test matrix.
CsrMatrix spd(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 4.0 + 0.01 * i);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
  }
  return csr_from_triplets(n, n, t);
}

}  // namespace

TEST_CASE("convergence rate and reduction count follow their definitions") {
  CHECK(convergence_rate({1.0, 0.1, 0.01}) == doctest::Approx(1.0));
  CHECK(convergence_rate({8.0, 4.0, 2.0, 1.0}) == doctest::Approx(std::log10(2.0)));
  CHECK(convergence_rate({3.0}) == 0.0);
  CHECK(convergence_rate({1.0, 0.0}) == std::numeric_limits<double>::infinity());
  CHECK(iterations_to_reduce({1.0, 0.5, 1e-10, 1e-11}, 1e-10) == 2);
  CHECK(iterations_to_reduce({1.0, 0.5}, 1e-10) == -1);
  CHECK(iterations_to_reduce({}, 0.1) == -1);
}

TEST_CASE("Krylov methods solve a small SPD system") {
  const CsrMatrix a = spd(40);
  const Vector b = Vector::LinSpaced(40, -1.0, 2.0);
  const DenseMatrix da(a);
  const Vector exact = da.ldlt().solve(b);
  const Vector inv_d = diagonal(a).cwiseInverse();
  const Preconditioner jac = [&](const Vector& r, Vector& z) { z = r.cwiseProduct(inv_d); };

  const SolveReport p = pcg(a, b, jac, 1e-12, 100);
  CHECK(p.converged);
  CHECK((p.solution - exact).norm() < 1e-9 * exact.norm());
  CHECK(p.iterations == static_cast<int>(p.monitor_history.size()) - 1);
  CHECK(p.residual_history.size() == p.monitor_history.size());

  const SolveReport pt = pcg(a, b, jac, 1e-12, 100, MonitorNorm::True);
  CHECK(pt.norm == "true");
  CHECK(pt.monitor_history == pt.residual_history);

  const SolveReport g = gmres(a, b, identity_preconditioner(), 1e-12, 10, 200);
  CHECK(g.converged);
  CHECK((g.solution - exact).norm() < 1e-9 * exact.norm());

  const Preconditioner damped = [&](const Vector& r, Vector& z) { z = 0.9 * r.cwiseProduct(inv_d); };
  const SolveReport s = stationary(a, b, damped, 1e-12, 500);
  CHECK(s.converged);
  CHECK(s.update_history.size() == static_cast<std::size_t>(s.iterations));
  CHECK((s.solution - exact).norm() < 1e-9 * exact.norm());
}

TEST_CASE("zero right-hand side and trivial tolerance return without iterating") {
  const CsrMatrix a = spd(5);
  const SolveReport z = pcg(a, Vector::Zero(5), identity_preconditioner(), 1e-10, 10);
  CHECK(z.converged);
  CHECK(z.iterations == 0);
  const SolveReport t = pcg(a, Vector::Ones(5), identity_preconditioner(), 1.0, 10);
  CHECK(t.iterations == 0);
  CHECK(gmres(a, Vector::Zero(5), identity_preconditioner(), 1e-10, 3, 10).iterations == 0);
  CHECK_THROWS(pcg(a, Vector::Ones(4), identity_preconditioner(), 1e-10, 10));
  CHECK_THROWS(gmres(a, Vector::Ones(5), identity_preconditioner(), 1e-10, 0, 10));
}

TEST_CASE("PCG flags a breakdown on an indefinite operator") {
  const CsrMatrix a = csr_from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
  const SolveReport r = pcg(a, Vector::Unit(2, 0), identity_preconditioner(), 1e-10, 10);
  CHECK(r.breakdown);
  CHECK(!r.converged);
}

TEST_CASE("smoothers reduce the error and respect the mask") {
  const CsrMatrix a = spd(30);
  const Vector b = Vector::Ones(30);
  const Vector exact = DenseMatrix(a).ldlt().solve(b);
  for (SmootherKind k : {SmootherKind::RichardsonIlu0, SmootherKind::RichardsonJacobi, SmootherKind::SymGaussSeidel}) {
    CAPTURE(smoother_name(k));
    const Smoother s(a, Mask(30, 1), k, k == SmootherKind::SymGaussSeidel ? 1.0 : 0.8);
    Vector x = Vector::Zero(30);
    for (int i = 0; i < 5; ++i) s.smooth(a, x, b);
    CHECK((x - exact).norm() < 0.5 * exact.norm());
    CHECK(parse_smoother(smoother_name(k)) == k);

    Mask half(30, 0);
    for (int i = 0; i < 15; ++i) half[i] = 1;
    const Smoother m(a, half, k, 0.8);
    Vector y = Vector::Zero(30);
    m.smooth(a, y, b);
    for (int i = 15; i < 30; ++i) CHECK(y[i] == 0.0);
  }
  CHECK(parse_smoother("ilu0") == SmootherKind::RichardsonIlu0);
  CHECK_THROWS(parse_smoother("chebyshev"));
  CHECK(parse_ordering("rcm") == IluOrdering::Rcm);
}

TEST_CASE("ILU(0) is exact on a tridiagonal matrix and falls back on a zero pivot") {
  const CsrMatrix a = spd(12);
  const Ilu0 f(a);
  REQUIRE(f.ok());
  Vector x = Vector::LinSpaced(12, 0, 1);
  const Vector b = a * x;
  Vector y = b;
  f.solve(y);
  CHECK((y - x).norm() < 1e-13);

  std::vector<int> perm(12);
  for (int i = 0; i < 12; ++i) perm[i] = 11 - i;
  const Ilu0 g(a, perm);
  Vector z = b;
  g.solve(z);
  CHECK((z - x).norm() < 1e-13);

  const CsrMatrix singular = csr_from_triplets(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
  CHECK(!Ilu0(singular).ok());
  const Smoother s(singular, Mask(2, 1), SmootherKind::RichardsonIlu0, 0.5);
  CHECK(s.requested() == SmootherKind::RichardsonIlu0);
  CHECK(s.effective() == SmootherKind::RichardsonJacobi);
}

TEST_CASE("V-cycle is linear, vanishes on constrained dofs and is symmetric for symmetric smoothing") {
  const HierarchicalMesh m = planned_mesh(kQ1, Strategy::Circle, 5);
  for (SmootherKind k : {SmootherKind::RichardsonIlu0, SmootherKind::SymGaussSeidel, SmootherKind::RichardsonJacobi}) {
    for (SmoothingMode mode : {SmoothingMode::Global, SmoothingMode::Bpwx}) {
      CAPTURE(smoother_name(k));
      CAPTURE(mode_name(mode));
      MgOptions o;
      o.smoother = k;
      o.mode = mode;
      o.omega = k == SmootherKind::SymGaussSeidel ? 1.0 : 0.7;
      const MgHierarchy h = hierarchy(m, o);
      const Vector u = random_free(h, 1), v = random_free(h, 2);
      const Vector vu = h.vcycle(u), vv = h.vcycle(v);
      CHECK((h.vcycle(2.0 * u - 3.0 * v) - (2.0 * vu - 3.0 * vv)).norm() < 1e-12 * vu.norm());
      for (Eigen::Index i = 0; i < u.size(); ++i)
        if (h.constrained()[i]) CHECK(vu[i] == 0.0);
      CHECK(std::abs(v.dot(vu) - u.dot(vv)) < 1e-12 * std::abs(v.dot(vu)) + 1e-14);
      CHECK(u.dot(vu) > 0.0);
    }
  }
}

TEST_CASE("one-level hierarchy is an exact solver") {
  HierarchicalMesh m(square_for(kQ2));
  const MgHierarchy h = hierarchy(m);
  CHECK(h.num_levels() == 1);
  const SolveReport r = stationary_solve(h, h.rhs(), 1e-12, 5);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  CHECK((h.matrix() * r.solution - h.rhs()).norm() < 1e-12 * h.rhs().norm());
}

TEST_CASE("multigrid solvers converge on adaptive meshes for every family") {
  for (const FeFamily f : {kQ1, kQ2, kP1, kP2, kHex1}) {
    CAPTURE(family_name(f));
    const HierarchicalMesh m = planned_mesh(f, Strategy::Quadrant, f.shape == Shape::Hex ? 3 : 5);
    const MgHierarchy h = hierarchy(m);
    const SolveReport p = pcg_solve(h, h.rhs(), 1e-10, 100);
    CHECK(p.converged);
    CHECK(p.iterations < 30);
    const Vector res = h.rhs() - h.matrix() * p.solution;
    CHECK(res.norm() < 1e-8 * h.rhs().norm());
    const SolveReport g = gmres_solve(h, h.rhs(), 1e-10, 30, 100);
    CHECK(g.converged);
    const SolveReport s = stationary_solve(h, h.rhs(), 1e-10 * h.rhs().norm(), 200);
    CHECK(s.converged);
    CHECK((s.solution - p.solution).norm() < 1e-7 * p.solution.norm());
  }
}

TEST_CASE("nodal solution interpolates hanging values from their masters") {
  const HierarchicalMesh m = planned_mesh(kQ1, Strategy::Quadrant, 3);
  const MgHierarchy h = hierarchy(m);
  const SolveReport p = pcg_solve(h, h.rhs(), 1e-12, 100);
  const Vector u = h.to_nodal(p.solution);
  const MeshLevel& l = m.finest();
  const ReferenceElement ref(kQ1);
  REQUIRE(u.size() == l.num_nodes());
  int checked = 0;
  for (int n = 0; n < l.num_nodes(); ++n) {
    if (!l.is_hanging(n)) continue;
    // a bilinear hanging node is the linear interpolant along the edge of its coarsest host
    const HangingHost* host = l.designated_host(n);
    const auto& edge = ref.boundary_entities()[host->entity];
    const auto nodes = l.nodes_of(host->element);
    double t = -1;
    REQUIRE(ref.on_entity(edge, host->xi, 1e-12, &t));
    const double lin = (1 - t) * u[nodes[edge.vertices[0]]] + t * u[nodes[edge.vertices[1]]];
    CHECK(u[n] == doctest::Approx(lin).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked > 0);
  CHECK(u.maxCoeff() > 0.0);
}
