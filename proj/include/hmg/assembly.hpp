#pragma once

#include <functional>

#include "hmg/mesh.hpp"
#include "hmg/sparse.hpp"

namespace hmg {

using SourceFunction = std::function<double(const Point&)>;

struct SystemPair {
  CsrMatrix A;
  Vector f;
  Mask dirichlet;
};

// Element-local stiffness and load for the Poisson form on element e.
void element_poisson(const MeshLevel& lvl, int e, const QuadratureRule& q, const SourceFunction& f,
                     std::vector<double>& ke, std::vector<double>& fe);

// Assembles the unconstrained stiffness matrix and load vector over all
// active elements. Homogeneous Dirichlet nodes (boundary, not hanging) are
// eliminated symmetrically: row and column zeroed, unit diagonal, zero load.
SystemPair assemble_poisson(const MeshLevel& lvl, const SourceFunction& f);
SystemPair assemble_poisson(const MeshLevel& lvl, const SourceFunction& f, const QuadratureRule& q);

// Stiffness matrix without boundary elimination.
CsrMatrix assemble_stiffness(const MeshLevel& lvl, const QuadratureRule& q);

// r = f - A u.
Vector residual(const CsrMatrix& A, const Vector& f, const Vector& u);

}  // namespace hmg
