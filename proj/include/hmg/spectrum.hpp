#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hmg/markers.hpp"
#include "hmg/mesh.hpp"
#include "hmg/multigrid.hpp"
#include "hmg/sparse.hpp"

namespace hmg {

using LinearOperator = std::function<void(const Vector& x, Vector& y)>;

struct PowerOptions {
  int restarts = 5;
  double tol = 1e-8;     // relative change of successive estimates
  int max_it = 20000;
  int block = 3;         // subspace dimension; Ritz values of the block cover complex pairs
  std::uint64_t seed = 1;
};

struct PowerResult {
  double rho = 0.0;
  int iterations = 0;    // largest count over restarts
  bool converged = false;
  double residual = 0.0; // ‖E X − X S‖_F / ‖E X‖_F of the final block
  std::vector<double> per_restart;
};

// Dominant eigenvalue magnitude by block power iteration with Rayleigh–Ritz
// extraction; the maximum over random restarts is reported.
PowerResult spectral_radius(const DenseMatrix& e, const PowerOptions& opts = {});
PowerResult spectral_radius(const LinearOperator& op, int n, const PowerOptions& opts = {});

// Columns D̂⁻¹ e_l (one V-cycle each), restricted to the free dofs.
DenseMatrix materialize_preconditioner(const MgHierarchy& h, int cap = 6000);
// E = I − D̂⁻¹ Â on the free dofs.
DenseMatrix error_operator(const MgHierarchy& h, const DenseMatrix& dinv);
// Matrix-free E on the free dofs.
LinearOperator error_operator(const MgHierarchy& h);

struct SpectrumConfig {
  FeFamily family{Shape::Quad, 2};
  std::vector<int> levels{3, 5, 6};
  std::vector<int> nus{1, 2, 4, 8};
  std::vector<SmoothingMode> methods{SmoothingMode::Global, SmoothingMode::Bpwx};
  SmootherKind smoother = SmootherKind::RichardsonIlu0;
  double omega = 0.6;
  IluOrdering ordering = IluOrdering::Natural;
  double fraction = 0.5;
  std::uint64_t seed = 42;
  int cap = 6000;
  bool materialize = true;
  PowerOptions power;
};

struct SpectrumReport {
  std::string method;
  std::string element;
  std::uint64_t seed = 0;
  int level = 0;
  int nu = 0;
  int dofs = 0;
  double rho = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  bool materialized = false;
};

// Unit square, 2x2 coarse grid, one uniform refinement, then random marking.
HierarchicalMesh spectrum_mesh(FeFamily family, int levels, std::uint64_t seed, double fraction = 0.5);

// Spectral radius of one configuration on level `level` of `mesh`.
SpectrumReport spectrum_case(const HierarchicalMesh& mesh, int level, SmoothingMode mode, int nu,
                             const SpectrumConfig& cfg);

std::vector<SpectrumReport> spectrum_sweep(const SpectrumConfig& cfg);

}  // namespace hmg
