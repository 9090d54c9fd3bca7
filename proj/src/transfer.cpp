#include "hmg/transfer.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace hmg {

CsrMatrix build_Q(const MeshLevel& coarse, const MeshLevel& fine) {
  if (fine.index != coarse.index + 1 || !(fine.family == coarse.family))
    throw std::invalid_argument("build_Q: levels are not consecutive levels of one hierarchy");
  const ReferenceElement ref(fine.family);
  const int nc = coarse.num_nodes();
  const int nf = fine.num_nodes();
  const int npe = fine.nodes_per_element;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(nc) + static_cast<std::size_t>(nf - nc) * npe);
  std::vector<double> vals(npe);
  for (int n = 0; n < nf; ++n) {
    if (n < nc) {
      trip.emplace_back(n, n, 1.0);
      continue;
    }
    int best_parent = std::numeric_limits<int>::max();
    int best_elem = -1;
    for (int e : fine.elements_of(n)) {
      const LevelElement& el = fine.elements[e];
      if (el.child_index < 0) continue;
      if (el.parent < best_parent) {
        best_parent = el.parent;
        best_elem = e;
      }
    }
    if (best_elem < 0) throw std::runtime_error("build_Q: fine node " + std::to_string(n) + " has no parent element");
    const LevelElement& el = fine.elements[best_elem];
    const Point xi = ref.to_parent(el.child_index, ref.nodes()[fine.local_index(best_elem, n)]);
    ref.values(xi, vals.data());
    const auto cnodes = coarse.nodes_of(el.parent);
    for (int j = 0; j < npe; ++j)
      if (vals[j] != 0.0) trip.emplace_back(n, cnodes[j], vals[j]);
  }
  return csr_from_triplets(nf, nc, trip);
}

CsrMatrix build_Qhat(const CsrMatrix& q, const CsrMatrix& rhat_coarse, const MeshLevel& coarse,
                     const MeshLevel& fine) {
  if (q.cols() != rhat_coarse.rows() || q.rows() != fine.num_nodes() || q.cols() != coarse.num_nodes())
    throw std::invalid_argument("build_Qhat: dimension mismatch");
  const CsrMatrix rt = transpose(rhat_coarse);
  const CsrMatrix qr = q * rt;
  return zero_rows_cols(qr, fine.constrained_mask(), coarse.dirichlet);
}

CsrMatrix constrain_operator(const CsrMatrix& a, const CsrMatrix& rhat, const Mask& constrained) {
  if (a.rows() != rhat.rows() || a.cols() != rhat.cols()) throw std::invalid_argument("constrain_operator: size mismatch");
  const CsrMatrix rt = transpose(rhat);
  const CsrMatrix ra = rhat * a;
  const CsrMatrix rar = ra * rt;
  return constrain_unit_diagonal(rar, constrained);
}

Vector constrain_rhs(const CsrMatrix& rhat, const Vector& f, const Mask& constrained) {
  Vector g = rhat * f;
  apply_mask_zero(g, constrained);
  return g;
}

CsrMatrix galerkin_coarsen(const CsrMatrix& ahat_fine, const CsrMatrix& qhat, const Mask& coarse_constrained) {
  if (qhat.rows() != ahat_fine.rows()) throw std::invalid_argument("galerkin_coarsen: dimension mismatch");
  // Round-off can leave an entry exactly zero on one side of the diagonal and
  // tiny on the other; averaging keeps both pattern and values symmetric, which
  // the ILU(0) factor relies on.
  const CsrMatrix c = triple_product(qhat, ahat_fine);
  const CsrMatrix sym = 0.5 * (c + transpose(c));
  return constrain_unit_diagonal(drop_exact_zeros(sym), coarse_constrained);
}

}  // namespace hmg
