#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hmg/assembly.hpp"
#include "hmg/mesh.hpp"
#include "hmg/smoother.hpp"
#include "hmg/sparse.hpp"

namespace hmg {

enum class SmoothingMode {
  Global,      // smooth every free dof on every level
  Bpwx,        // local smoothing: BpwxStrict plus the dofs that became free at this level
  BpwxStrict,  // dofs of elements created at this level, minus master, hanging and Dirichlet nodes
};
std::string mode_name(SmoothingMode m);
// Accepts global | bpwx | bpwx-strict.
SmoothingMode parse_mode(const std::string& name);

struct MgOptions {
  SmootherKind smoother = SmootherKind::RichardsonIlu0;
  double omega = 0.8;
  int nu_pre = 1;
  int nu_post = 1;
  SmoothingMode mode = SmoothingMode::Global;
  IluOrdering ordering = IluOrdering::Natural;
};

struct MgLevel {
  CsrMatrix A;      // constrained operator of this level
  CsrMatrix P;      // Q̂ from the next coarser level (empty on level 0)
  CsrMatrix Pt;     // its transpose
  Mask constrained; // hanging or Dirichlet
  Mask global_mask;
  Mask bpwx_mask;
  Mask bpwx_strict_mask;
  Mask smooth_mask;  // the one selected by the current options
  std::unique_ptr<Smoother> smoother;
};

// Smoothing subset on `lvl` for the given mode; `previous` is the next
// coarser level, or nullptr on the coarsest level (where every free dof is smoothed).
Mask smoothing_mask(const MeshLevel& lvl, const MeshLevel* previous, SmoothingMode mode);

class MgHierarchy {
 public:
  // Galerkin hierarchy over mesh levels 0..finest, starting from the
  // unconstrained fine system `fine`.
  static MgHierarchy build(const HierarchicalMesh& mesh, int finest, const SystemPair& fine, const MgOptions& opts);
  // Same, releasing the fine system as soon as it has been constrained.
  static MgHierarchy build(const HierarchicalMesh& mesh, int finest, SystemPair&& fine, const MgOptions& opts);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const MgLevel& level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
  const MgOptions& options() const { return opts_; }
  // Rebuild smoothers for new options; operators are kept.
  void set_options(const MgOptions& opts);

  const CsrMatrix& matrix() const { return levels_.back().A; }
  const Vector& rhs() const { return fhat_; }
  const CsrMatrix& rhat() const { return rhat_; }
  const Mask& constrained() const { return levels_.back().constrained; }
  std::vector<int> free_dofs() const;

  // One V-cycle with zero initial guess applied to r; output zero on constrained dofs.
  Vector vcycle(const Vector& r) const;
  // Nodal values in V (hanging entries filled in) from a constrained coefficient vector.
  Vector to_nodal(const Vector& uhat) const;

 private:
  static MgHierarchy build_impl(const HierarchicalMesh& mesh, int finest, const CsrMatrix& a, const Vector& f,
                                const MgOptions& opts, SystemPair* release);
  Vector cycle(int k, const Vector& r) const;
  void setup_coarse();

  MgOptions opts_;
  std::vector<MgLevel> levels_;
  CsrMatrix rhat_;
  Vector fhat_;
  std::vector<int> coarse_free_;
  Eigen::LDLT<DenseMatrix> coarse_solver_;
};

}  // namespace hmg
