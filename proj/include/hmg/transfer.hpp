#pragma once

#include "hmg/mesh.hpp"
#include "hmg/sparse.hpp"

namespace hmg {

// Prolongation V_{k-1} -> V_k by interpolation in the designated parent
// element (lowest parent element id among the fine elements containing the
// node). Rows of nodes already present at k-1 are unit rows.
CsrMatrix build_Q(const MeshLevel& coarse, const MeshLevel& fine);

// Q̂ = Q R̂ᵀ_{k-1}, with fine rows of hanging/Dirichlet nodes and coarse
// columns of Dirichlet nodes removed.
CsrMatrix build_Qhat(const CsrMatrix& q, const CsrMatrix& rhat_coarse, const MeshLevel& coarse,
                     const MeshLevel& fine);

// R̂ A R̂ᵀ with unit diagonal on the constrained (hanging or Dirichlet) nodes.
CsrMatrix constrain_operator(const CsrMatrix& a, const CsrMatrix& rhat, const Mask& constrained);
// R̂ f, zero on constrained nodes.
Vector constrain_rhs(const CsrMatrix& rhat, const Vector& f, const Mask& constrained);

// Q̂ᵀ Â Q̂ followed by unit diagonal on the coarse constrained nodes.
CsrMatrix galerkin_coarsen(const CsrMatrix& ahat_fine, const CsrMatrix& qhat, const Mask& coarse_constrained);

}  // namespace hmg
