#include "hmg/multigrid.hpp"

#include <stdexcept>

#include "hmg/constraints.hpp"
#include "hmg/transfer.hpp"

namespace hmg {

std::string mode_name(SmoothingMode m) {
  switch (m) {
    case SmoothingMode::Global: return "global";
    case SmoothingMode::Bpwx: return "bpwx";
    case SmoothingMode::BpwxStrict: return "bpwx-strict";
  }
  return "?";
}

SmoothingMode parse_mode(const std::string& name) {
  if (name == "global") return SmoothingMode::Global;
  if (name == "bpwx") return SmoothingMode::Bpwx;
  if (name == "bpwx-strict") return SmoothingMode::BpwxStrict;
  throw std::invalid_argument("unknown smoothing method '" + name + "'");
}

Mask smoothing_mask(const MeshLevel& lvl, const MeshLevel* previous, SmoothingMode mode) {
  const int nn = lvl.num_nodes();
  Mask m(nn, 0);
  const Mask cons = lvl.constrained_mask();
  if (mode == SmoothingMode::Global || !previous) {
    for (int n = 0; n < nn; ++n) m[n] = cons[n] ? 0 : 1;
    return m;
  }
  for (int e = 0; e < lvl.num_elements(); ++e) {
    if (lvl.elements[e].created_level != lvl.index) continue;
    for (int n : lvl.nodes_of(e)) m[n] = 1;
  }
  for (int n = 0; n < nn; ++n)
    if (cons[n] || lvl.tags[n] == NodeTag::Master) m[n] = 0;
  if (mode == SmoothingMode::Bpwx) {
    // A node that was absent or constrained one level down carries part of
    // the level increment; leaving it out can make the local subspaces miss
    // V_k entirely when interfaces persist across levels.
    const Mask prev_cons = previous->constrained_mask();
    for (int n = 0; n < nn; ++n)
      if (!cons[n] && (n >= previous->num_nodes() || prev_cons[n])) m[n] = 1;
  }
  return m;
}

MgHierarchy MgHierarchy::build(const HierarchicalMesh& mesh, int finest, const SystemPair& fine, const MgOptions& opts) {
  return build_impl(mesh, finest, fine.A, fine.f, opts, nullptr);
}

MgHierarchy MgHierarchy::build(const HierarchicalMesh& mesh, int finest, SystemPair&& fine, const MgOptions& opts) {
  return build_impl(mesh, finest, fine.A, fine.f, opts, &fine);
}

MgHierarchy MgHierarchy::build_impl(const HierarchicalMesh& mesh, int finest, const CsrMatrix& a, const Vector& f,
                                    const MgOptions& opts, SystemPair* release) {
  if (finest < 0 || finest >= mesh.num_levels()) throw std::invalid_argument("MgHierarchy: finest level out of range");
  const MeshLevel& top = mesh.level(finest);
  if (a.rows() != top.num_nodes()) throw std::invalid_argument("MgHierarchy: system size does not match mesh");
  MgHierarchy h;
  h.opts_ = opts;
  h.levels_.resize(finest + 1);
  for (int k = 0; k <= finest; ++k) {
    MgLevel& lv = h.levels_[k];
    lv.constrained = mesh.level(k).constrained_mask();
    const MeshLevel* prev = k > 0 ? &mesh.level(k - 1) : nullptr;
    lv.global_mask = smoothing_mask(mesh.level(k), prev, SmoothingMode::Global);
    lv.bpwx_mask = smoothing_mask(mesh.level(k), prev, SmoothingMode::Bpwx);
    lv.bpwx_strict_mask = smoothing_mask(mesh.level(k), prev, SmoothingMode::BpwxStrict);
  }

  h.rhat_ = assemble_Rhat(top);
  h.levels_[finest].A = constrain_operator(a, h.rhat_, h.levels_[finest].constrained);
  h.fhat_ = constrain_rhs(h.rhat_, f, h.levels_[finest].constrained);
  if (release) *release = SystemPair{};
  for (int k = finest; k >= 1; --k) {
    MgLevel& lv = h.levels_[k];
    {
      const CsrMatrix q = build_Q(mesh.level(k - 1), mesh.level(k));
      lv.P = build_Qhat(q, assemble_Rhat(mesh.level(k - 1)), mesh.level(k - 1), mesh.level(k));
    }
    lv.Pt = transpose(lv.P);
    h.levels_[k - 1].A = galerkin_coarsen(lv.A, lv.P, h.levels_[k - 1].constrained);
  }
  h.setup_coarse();
  h.set_options(opts);
  return h;
}

void MgHierarchy::setup_coarse() {
  const MgLevel& c = levels_.front();
  coarse_free_ = indices_where(c.constrained, false);
  if (coarse_free_.empty()) return;
  const DenseMatrix a = dense_submatrix(c.A, coarse_free_, coarse_free_);
  coarse_solver_.compute(a);
  if (coarse_solver_.info() != Eigen::Success || !coarse_solver_.isPositive())
    throw std::runtime_error("MgHierarchy: coarsest matrix is singular or indefinite");
  const auto d = coarse_solver_.vectorD();
  if (d.minCoeff() <= 1e-14 * d.maxCoeff()) throw std::runtime_error("MgHierarchy: coarsest matrix is singular");
}

void MgHierarchy::set_options(const MgOptions& opts) {
  if (opts.nu_pre < 0 || opts.nu_post < 0) throw std::invalid_argument("MgHierarchy: negative smoothing count");
  opts_ = opts;
  const int nl = num_levels();
  for (int k = 0; k < nl; ++k) {
    MgLevel& lv = levels_[k];
    switch (opts.mode) {
      case SmoothingMode::Global: lv.smooth_mask = lv.global_mask; break;
      case SmoothingMode::Bpwx: lv.smooth_mask = lv.bpwx_mask; break;
      case SmoothingMode::BpwxStrict: lv.smooth_mask = lv.bpwx_strict_mask; break;
    }
    lv.smoother = std::make_unique<Smoother>(lv.A, lv.smooth_mask, opts.smoother, opts.omega, opts.ordering);
  }
}

std::vector<int> MgHierarchy::free_dofs() const { return indices_where(constrained(), false); }

Vector MgHierarchy::cycle(int k, const Vector& r) const {
  const MgLevel& lv = levels_[k];
  if (k == 0) {
    Vector x = Vector::Zero(r.size());
    if (coarse_free_.empty()) return x;
    Vector rf(static_cast<Eigen::Index>(coarse_free_.size()));
    for (std::size_t i = 0; i < coarse_free_.size(); ++i) rf[i] = r[coarse_free_[i]];
    const Vector xf = coarse_solver_.solve(rf);
    for (std::size_t i = 0; i < coarse_free_.size(); ++i) x[coarse_free_[i]] = xf[i];
    return x;
  }
  Vector x = Vector::Zero(r.size());
  for (int s = 0; s < opts_.nu_pre; ++s) lv.smoother->smooth(lv.A, x, r);
  const Vector res = r - lv.A * x;
  const Vector rc = lv.Pt * res;
  const Vector ec = cycle(k - 1, rc);
  x += lv.P * ec;
  for (int s = 0; s < opts_.nu_post; ++s) lv.smoother->smooth(lv.A, x, r);
  apply_mask_zero(x, lv.constrained);
  return x;
}

Vector MgHierarchy::vcycle(const Vector& r) const {
  if (r.size() != matrix().rows()) throw std::invalid_argument("vcycle: size mismatch");
  Vector rr = r;
  apply_mask_zero(rr, constrained());
  return cycle(num_levels() - 1, rr);
}

Vector MgHierarchy::to_nodal(const Vector& uhat) const { return rhat_.transpose() * uhat; }

}  // namespace hmg
