#include "hmg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "hmg/assembly.hpp"

namespace hmg {

namespace {

// Modified Gram–Schmidt, applied twice. Columns that vanish are replaced by
// random directions to keep the block full rank.
void orthonormalize(DenseMatrix& x, SplitMix64& rng) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) x.col(j) -= x.col(i).dot(x.col(j)) * x.col(i);
      double nrm = x.col(j).norm();
      if (nrm < 1e-300) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, j) = 2.0 * rng.uniform() - 1.0;
        for (Eigen::Index i = 0; i < j; ++i) x.col(j) -= x.col(i).dot(x.col(j)) * x.col(i);
        nrm = x.col(j).norm();
      }
      x.col(j) /= nrm;
    }
}

double ritz_radius(const DenseMatrix& s) {
  if (s.rows() == 1) return std::abs(s(0, 0));
  Eigen::EigenSolver<DenseMatrix> es(s, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

template <typename Apply>
PowerResult block_power(Apply apply, int n, const PowerOptions& opts) {
  if (n <= 0) throw std::invalid_argument("spectral_radius: empty operator");
  if (opts.restarts < 1 || opts.block < 1) throw std::invalid_argument("spectral_radius: bad options");
  const int b = std::min(opts.block, n);
  PowerResult res;
  res.converged = true;
  SplitMix64 rng(opts.seed);
  for (int r = 0; r < opts.restarts; ++r) {
    DenseMatrix x(n, b);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = 2.0 * rng.uniform() - 1.0;
    orthonormalize(x, rng);
    DenseMatrix y(n, b);
    double est = 0.0, prev = -1.0, resid = 0.0;
    bool conv = false;
    int it = 0;
    for (it = 1; it <= opts.max_it; ++it) {
      apply(x, y);
      const double ny = y.norm();
      if (ny == 0.0) {
        est = 0.0;
        conv = true;
        resid = 0.0;
        break;
      }
      const DenseMatrix s = x.transpose() * y;
      est = ritz_radius(s);
      resid = (y - x * s).norm() / ny;
      if (prev >= 0.0 && std::abs(est - prev) <= opts.tol * std::max(est, 1e-300)) {
        conv = true;
        break;
      }
      prev = est;
      x = y;
      orthonormalize(x, rng);
    }
    res.per_restart.push_back(est);
    res.iterations = std::max(res.iterations, std::min(it, opts.max_it));
    res.converged = res.converged && conv;
    if (est >= res.rho) {
      res.rho = est;
      res.residual = resid;
    }
  }
  return res;
}

}  // namespace

PowerResult spectral_radius(const DenseMatrix& e, const PowerOptions& opts) {
  if (e.rows() != e.cols()) throw std::invalid_argument("spectral_radius: matrix not square");
  return block_power([&](const DenseMatrix& x, DenseMatrix& y) { y.noalias() = e * x; },
                     static_cast<int>(e.rows()), opts);
}

PowerResult spectral_radius(const LinearOperator& op, int n, const PowerOptions& opts) {
  return block_power(
      [&](const DenseMatrix& x, DenseMatrix& y) {
        Vector xi(n), yi(n);
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
          xi = x.col(j);
          op(xi, yi);
          y.col(j) = yi;
        }
      },
      n, opts);
}

DenseMatrix materialize_preconditioner(const MgHierarchy& h, int cap) {
  const std::vector<int> freed = h.free_dofs();
  const int n = static_cast<int>(freed.size());
  if (n > cap)
    throw std::runtime_error("materialize_preconditioner: " + std::to_string(n) + " free dofs exceed the cap of " +
                             std::to_string(cap));
  const Eigen::Index nn = h.matrix().rows();
  DenseMatrix d(n, n);
  Vector e = Vector::Zero(nn);
  for (int l = 0; l < n; ++l) {
    e[freed[l]] = 1.0;
    const Vector col = h.vcycle(e);
    e[freed[l]] = 0.0;
    for (int i = 0; i < n; ++i) d(i, l) = col[freed[i]];
  }
  return d;
}

DenseMatrix error_operator(const MgHierarchy& h, const DenseMatrix& dinv) {
  const std::vector<int> freed = h.free_dofs();
  const int n = static_cast<int>(freed.size());
  if (dinv.rows() != n || dinv.cols() != n) throw std::invalid_argument("error_operator: size mismatch");
  std::vector<int> pos(h.matrix().rows(), -1);
  for (int i = 0; i < n; ++i) pos[freed[i]] = i;
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i)
    for (CsrMatrix::InnerIterator it(h.matrix(), freed[i]); it; ++it)
      if (pos[it.col()] >= 0) trip.emplace_back(i, pos[it.col()], it.value());
  Eigen::SparseMatrix<double> aff(n, n);
  aff.setFromTriplets(trip.begin(), trip.end());
  DenseMatrix e = -(dinv * aff);
  e.diagonal().array() += 1.0;
  return e;
}

LinearOperator error_operator(const MgHierarchy& h) {
  const std::vector<int> freed = h.free_dofs();
  const Eigen::Index nn = h.matrix().rows();
  return [&h, freed, nn](const Vector& x, Vector& y) {
    Vector full = Vector::Zero(nn);
    for (std::size_t i = 0; i < freed.size(); ++i) full[freed[i]] = x[static_cast<Eigen::Index>(i)];
    const Vector w = h.vcycle(h.matrix() * full);
    y.resize(static_cast<Eigen::Index>(freed.size()));
    for (std::size_t i = 0; i < freed.size(); ++i) y[static_cast<Eigen::Index>(i)] = x[static_cast<Eigen::Index>(i)] - w[freed[i]];
  };
}

HierarchicalMesh spectrum_mesh(FeFamily family, int levels, std::uint64_t seed, double fraction) {
  HierarchicalMesh mesh(rectangle_mesh(family, 2, 2, 0.0, 1.0, 0.0, 1.0));
  RefinementPlan plan;
  plan.strategy = Strategy::Random;
  plan.levels = levels;
  plan.uniform_levels = 1;
  plan.fraction = fraction;
  plan.seed = seed;
  apply_plan(mesh, plan);
  return mesh;
}

SpectrumReport spectrum_case(const HierarchicalMesh& mesh, int level, SmoothingMode mode, int nu,
                             const SpectrumConfig& cfg) {
  const SystemPair sys = assemble_poisson(mesh.level(level), [](const Point&) { return 1.0; });
  MgOptions o;
  o.smoother = cfg.smoother;
  o.omega = cfg.omega;
  o.ordering = cfg.ordering;
  o.nu_pre = nu;
  o.nu_post = nu;
  o.mode = mode;
  const MgHierarchy h = MgHierarchy::build(mesh, level, sys, o);
  SpectrumReport rep;
  rep.method = mode_name(mode);
  rep.element = family_name(mesh.family());
  rep.seed = cfg.seed;
  rep.level = level;
  rep.nu = nu;
  rep.dofs = static_cast<int>(h.free_dofs().size());
  PowerResult pr;
  if (cfg.materialize) {
    const DenseMatrix e = error_operator(h, materialize_preconditioner(h, cfg.cap));
    pr = spectral_radius(e, cfg.power);
    rep.materialized = true;
  } else {
    pr = spectral_radius(error_operator(h), rep.dofs, cfg.power);
  }
  rep.rho = pr.rho;
  rep.iterations = pr.iterations;
  rep.converged = pr.converged;
  rep.residual = pr.residual;
  return rep;
}

std::vector<SpectrumReport> spectrum_sweep(const SpectrumConfig& cfg) {
  if (cfg.levels.empty()) return {};
  const int top = *std::max_element(cfg.levels.begin(), cfg.levels.end());
  const HierarchicalMesh mesh = spectrum_mesh(cfg.family, top, cfg.seed, cfg.fraction);
  std::vector<SpectrumReport> out;
  for (SmoothingMode mode : cfg.methods)
    for (int level : cfg.levels)
      for (int nu : cfg.nus) out.push_back(spectrum_case(mesh, level, mode, nu, cfg));
  return out;
}

}  // namespace hmg
