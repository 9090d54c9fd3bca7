#pragma once

#include <string>
#include <vector>

#include "hmg/sparse.hpp"

namespace hmg {

enum class SmootherKind { RichardsonIlu0, RichardsonJacobi, SymGaussSeidel };

std::string smoother_name(SmootherKind k);
// Accepts ilu0 | richardson-ilu0, jacobi | richardson-jacobi, sgs | sym-gauss-seidel.
SmootherKind parse_smoother(const std::string& name);

// Ordering of the unknowns used when factorising the ILU(0) preconditioner.
enum class IluOrdering { Natural, Rcm };
std::string ordering_name(IluOrdering o);
// Accepts natural | rcm.
IluOrdering parse_ordering(const std::string& name);

// Incomplete LU factorisation with the sparsity pattern of the input. With
// a permutation the factor is computed for P A P^T and solve() maps in and out.
class Ilu0 {
 public:
  Ilu0() = default;
  explicit Ilu0(const CsrMatrix& a);
  Ilu0(const CsrMatrix& a, std::vector<int> perm);

  // False when a zero pivot was met; the factor is then unusable.
  bool ok() const { return ok_; }
  int size() const { return n_; }
  // In place: x <- (LU)^{-1} x.
  void solve(Vector& x) const;

 private:
  void factor(const CsrMatrix& a);
  void substitute(Vector& x) const;

  int n_ = 0;
  bool ok_ = false;
  std::vector<int> perm_;
  std::vector<int> ptr_, col_, diag_;
  std::vector<double> val_;
};

// Damped smoother acting only on the dofs flagged in `mask`. For the
// Richardson variants the preconditioner is built from the principal
// submatrix on the mask (other rows and columns replaced by identity).
class Smoother {
 public:
  Smoother(const CsrMatrix& a, Mask mask, SmootherKind kind, double omega,
           IluOrdering ordering = IluOrdering::Natural);

  // One smoothing step for A x = b.
  void smooth(const CsrMatrix& a, Vector& x, const Vector& b) const;

  SmootherKind requested() const { return requested_; }
  // Differs from requested() when ILU(0) hit a zero pivot and fell back to Jacobi.
  SmootherKind effective() const { return effective_; }
  const Mask& mask() const { return mask_; }
  double omega() const { return omega_; }

 private:
  Mask mask_;
  SmootherKind requested_, effective_;
  double omega_;
  Ilu0 ilu_;
  Vector inv_diag_;
};

}  // namespace hmg
