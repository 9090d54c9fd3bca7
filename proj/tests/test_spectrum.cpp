#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "hmg/assembly.hpp"
#include "hmg/spectrum.hpp"

using namespace hmg;
using namespace fixtures;

namespace {

const auto one = [](const Point&) { return 1.0; };

MgHierarchy hierarchy(const HierarchicalMesh& m, MgOptions o = {}) {
  const int top = m.num_levels() - 1;
  return MgHierarchy::build(m, top, assemble_poisson(m.level(top), one), o);
}

HierarchicalMesh uniform_q1(int levels) {
  HierarchicalMesh m(rectangle_mesh(kQ1, 2, 2, 0, 1, 0, 1));
  for (int k = 0; k < levels; ++k) m.refine(mark_all(m.finest()));
  return m;
}

}  // namespace

TEST_CASE("power iteration on small matrices with known spectra") {
  DenseMatrix d = DenseMatrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = 0.2;
  PowerResult r = spectral_radius(d);
  CHECK(r.converged);
  CHECK(r.rho == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.per_restart.size() == 5u);

  // rotation with a complex pair of modulus 0.3 plus a smaller real eigenvalue
  DenseMatrix rot = DenseMatrix::Zero(3, 3);
  const double c = 0.3 * std::cos(1.1), s = 0.3 * std::sin(1.1);
  rot << c, -s, 0, s, c, 0, 0, 0, 0.1;
  r = spectral_radius(rot);
  CHECK(r.rho == doctest::Approx(0.3).epsilon(1e-8));

  CHECK(spectral_radius(DenseMatrix::Zero(4, 4)).rho == 0.0);

  // non-normal Jordan-like block: eigenvalues 0.4 with a large off-diagonal
  DenseMatrix j(2, 2);
  j << 0.4, 5.0, 0.0, 0.25;
  CHECK(spectral_radius(j).rho == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("operator and dense paths agree on a random symmetric matrix") {
  SplitMix64 rng(9);
  DenseMatrix a(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int k = 0; k < 30; ++k) a(i, k) = rng.uniform() - 0.5;
  const DenseMatrix s = (a + a.transpose()) / 20.0;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(s);
  const double want = es.eigenvalues().cwiseAbs().maxCoeff();
  const LinearOperator op = [&](const Vector& x, Vector& y) { y = s * x; };
  CHECK(spectral_radius(op, 30).rho == doctest::Approx(want).epsilon(1e-6));
  CHECK(spectral_radius(s).rho == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("a single-level hierarchy has a vanishing error operator") {
  const HierarchicalMesh m(rectangle_mesh(kQ2, 2, 2, 0, 1, 0, 1));
  const MgHierarchy h = hierarchy(m);
  const DenseMatrix dinv = materialize_preconditioner(h);
  CHECK(spectral_radius(error_operator(h, dinv)).rho <= 1e-10);
  CHECK(spectral_radius(error_operator(h), static_cast<int>(h.free_dofs().size())).rho <= 1e-10);
}

TEST_CASE("materialised and matrix-free error operators coincide") {
  const HierarchicalMesh m = uniform_q1(2);
  const MgHierarchy h = hierarchy(m);
  const int n = static_cast<int>(h.free_dofs().size());
  const DenseMatrix dinv = materialize_preconditioner(h);
  REQUIRE(dinv.rows() == n);
  const DenseMatrix e = error_operator(h, dinv);
  const LinearOperator op = error_operator(h);
  SplitMix64 rng(4);
  for (int t = 0; t < 20; ++t) {
    Vector x(n), y;
    for (int i = 0; i < n; ++i) x[i] = rng.uniform() - 0.5;
    op(x, y);
    CHECK((y - e * x).norm() < 1e-12 * x.norm());
  }
  // columns are linear in the input
  Vector a(n), b(n), ya, yb, yab;
  for (int i = 0; i < n; ++i) {
    a[i] = std::sin(i + 1.0);
    b[i] = std::cos(2.0 * i);
  }
  op(a, ya);
  op(b, yb);
  op(a + 2.0 * b, yab);
  CHECK((yab - ya - 2.0 * yb).norm() < 1e-12 * yab.norm());
  CHECK_THROWS(materialize_preconditioner(h, n - 1));
}

TEST_CASE("two-level symmetric Gauss-Seidel V-cycle attains the textbook contraction") {
  const HierarchicalMesh m = uniform_q1(3);
  MgOptions o;
  o.smoother = SmootherKind::SymGaussSeidel;
  o.omega = 1.0;
  const MgHierarchy h = hierarchy(m, o);
  const PowerResult r = spectral_radius(error_operator(h, materialize_preconditioner(h)));
  CHECK(r.converged);
  CHECK(r.rho > 0.01);
  CHECK(r.rho < 0.2);
}

TEST_CASE("more smoothing never increases the spectral radius") {
  const HierarchicalMesh m = spectrum_mesh(kQ2, 3, 42);
  SpectrumConfig cfg;
  double prev = 1.0;
  for (int nu : {1, 2, 4}) {
    const SpectrumReport r = spectrum_case(m, 3, SmoothingMode::Global, nu, cfg);
    CAPTURE(nu);
    CHECK(r.converged);
    CHECK(r.materialized);
    CHECK(r.rho < prev);
    CHECK(r.dofs > 0);
    prev = r.rho;
  }
  const SpectrumReport b = spectrum_case(m, 3, SmoothingMode::Bpwx, 1, cfg);
  CHECK(b.rho < 1.0);
  CHECK(b.method == "bpwx");
  CHECK(b.element == "q2");
}

TEST_CASE("spectral mesh protocol is nested and reproducible") {
  const HierarchicalMesh a = spectrum_mesh(kQ2, 4, 7);
  const HierarchicalMesh b = spectrum_mesh(kQ2, 4, 7);
  CHECK(a.markers() == b.markers());
  CHECK(a.level(1).num_elements() == 16);
  // newest-only marking chooses only elements created by the last refinement
  for (int k = 2; k < a.num_levels() - 1; ++k)
    for (int e : a.markers()[k]) CHECK(a.level(k).elements[e].created_level == k);
}

TEST_CASE("local smoothing without the newly free dofs stalls on persistent interfaces") {
  HierarchicalMesh m(rectangle_mesh(kQ2, 2, 2, 0, 1, 0, 1));
  RefinementPlan p;
  p.strategy = Strategy::RandomActive;
  p.levels = 3;
  p.seed = 42;
  apply_plan(m, p);
  SpectrumConfig cfg;
  const SpectrumReport strict = spectrum_case(m, 3, SmoothingMode::BpwxStrict, 1, cfg);
  const SpectrumReport full = spectrum_case(m, 3, SmoothingMode::Bpwx, 1, cfg);
  CHECK(strict.rho > 0.999);
  CHECK(full.rho < 0.9);
}

TEST_CASE("sweep enumerates methods, levels and smoothing counts") {
  SpectrumConfig cfg;
  cfg.levels = {2, 3};
  cfg.nus = {1, 2};
  const auto rows = spectrum_sweep(cfg);
  REQUIRE(rows.size() == 8u);
  CHECK(rows.front().method == "global");
  CHECK(rows.back().method == "bpwx");
  for (const auto& r : rows) {
    CHECK(r.rho > 0.0);
    CHECK(r.rho < 1.0);
    CHECK(r.seed == 42u);
  }
}
