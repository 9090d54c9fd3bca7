#include "hmg/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace hmg {

std::string smoother_name(SmootherKind k) {
  switch (k) {
    case SmootherKind::RichardsonIlu0: return "richardson-ilu0";
    case SmootherKind::RichardsonJacobi: return "richardson-jacobi";
    case SmootherKind::SymGaussSeidel: return "sym-gauss-seidel";
  }
  return "?";
}

SmootherKind parse_smoother(const std::string& name) {
  if (name == "ilu0" || name == "ilu" || name == "richardson-ilu0") return SmootherKind::RichardsonIlu0;
  if (name == "jacobi" || name == "richardson-jacobi") return SmootherKind::RichardsonJacobi;
  if (name == "sgs" || name == "sym-gauss-seidel") return SmootherKind::SymGaussSeidel;
  throw std::invalid_argument("unknown smoother '" + name + "'");
}

std::string ordering_name(IluOrdering o) { return o == IluOrdering::Natural ? "natural" : "rcm"; }

IluOrdering parse_ordering(const std::string& name) {
  if (name == "natural") return IluOrdering::Natural;
  if (name == "rcm") return IluOrdering::Rcm;
  throw std::invalid_argument("unknown ILU ordering '" + name + "'");
}

Ilu0::Ilu0(const CsrMatrix& a) { factor(a); }

Ilu0::Ilu0(const CsrMatrix& a, std::vector<int> perm) {
  if (static_cast<Eigen::Index>(perm.size()) != a.rows()) throw std::invalid_argument("Ilu0: permutation size mismatch");
  factor(permute_symmetric(a, perm));
  perm_ = std::move(perm);
}

void Ilu0::factor(const CsrMatrix& a) {
  n_ = static_cast<int>(a.rows());
  if (a.rows() != a.cols()) throw std::invalid_argument("Ilu0: matrix not square");
  ptr_.assign(n_ + 1, 0);
  diag_.assign(n_, -1);
  col_.reserve(a.nonZeros());
  val_.reserve(a.nonZeros());
  std::vector<std::pair<int, double>> row;
  for (int i = 0; i < n_; ++i) {
    row.clear();
    for (CsrMatrix::InnerIterator it(a, i); it; ++it) row.emplace_back(static_cast<int>(it.col()), it.value());
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      if (c == i) diag_[i] = static_cast<int>(col_.size());
      col_.push_back(c);
      val_.push_back(v);
    }
    ptr_[i + 1] = static_cast<int>(col_.size());
    if (diag_[i] < 0) return;  // structurally missing diagonal: ok_ stays false
  }

  std::vector<int> pos(n_, -1);
  for (int i = 0; i < n_; ++i) {
    for (int p = ptr_[i]; p < ptr_[i + 1]; ++p) pos[col_[p]] = p;
    for (int p = ptr_[i]; p < diag_[i]; ++p) {
      const int k = col_[p];
      const double ukk = val_[diag_[k]];
      if (ukk == 0.0) return;
      const double l = val_[p] / ukk;
      val_[p] = l;
      for (int q = diag_[k] + 1; q < ptr_[k + 1]; ++q) {
        const int j = col_[q];
        if (pos[j] >= 0) val_[pos[j]] -= l * val_[q];
      }
    }
    for (int p = ptr_[i]; p < ptr_[i + 1]; ++p) pos[col_[p]] = -1;
    if (val_[diag_[i]] == 0.0) return;
  }
  ok_ = true;
}

void Ilu0::solve(Vector& x) const {
  if (!ok_) throw std::logic_error("Ilu0::solve on a failed factorisation");
  if (!perm_.empty()) {
    Vector y(n_);
    for (int i = 0; i < n_; ++i) y[i] = x[perm_[i]];
    substitute(y);
    for (int i = 0; i < n_; ++i) x[perm_[i]] = y[i];
    return;
  }
  substitute(x);
}

void Ilu0::substitute(Vector& x) const {
  for (int i = 0; i < n_; ++i) {
    double s = x[i];
    for (int p = ptr_[i]; p < diag_[i]; ++p) s -= val_[p] * x[col_[p]];
    x[i] = s;
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = x[i];
    for (int p = diag_[i] + 1; p < ptr_[i + 1]; ++p) s -= val_[p] * x[col_[p]];
    x[i] = s / val_[diag_[i]];
  }
}

Smoother::Smoother(const CsrMatrix& a, Mask mask, SmootherKind kind, double omega, IluOrdering ordering)
    : mask_(std::move(mask)), requested_(kind), effective_(kind), omega_(omega) {
  if (static_cast<Eigen::Index>(mask_.size()) != a.rows()) throw std::invalid_argument("Smoother: mask size mismatch");
  const Vector d = diagonal(a);
  inv_diag_ = Vector::Zero(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (mask_[i]) {
      if (d[i] == 0.0) throw std::runtime_error("Smoother: zero diagonal on a smoothed dof");
      inv_diag_[i] = 1.0 / d[i];
    }
  if (kind == SmootherKind::RichardsonIlu0) {
    Mask outside(mask_.size());
    for (std::size_t i = 0; i < mask_.size(); ++i) outside[i] = mask_[i] ? 0 : 1;
    const CsrMatrix masked = constrain_unit_diagonal(a, outside);
    ilu_ = ordering == IluOrdering::Rcm ? Ilu0(masked, reverse_cuthill_mckee(masked)) : Ilu0(masked);
    if (!ilu_.ok()) {
      std::cerr << "warning: ILU(0) met a zero pivot; falling back to the diagonal\n";
      effective_ = SmootherKind::RichardsonJacobi;
    }
  }
}

void Smoother::smooth(const CsrMatrix& a, Vector& x, const Vector& b) const {
  const Eigen::Index n = x.size();
  if (effective_ == SmootherKind::SymGaussSeidel) {
    const int* ptr = a.outerIndexPtr();
    const int* col = a.innerIndexPtr();
    const double* val = a.valuePtr();
    auto relax = [&](Eigen::Index i) {
      if (!mask_[i]) return;
      double s = b[i];
      for (int p = ptr[i]; p < ptr[i + 1]; ++p) s -= val[p] * x[col[p]];
      x[i] += omega_ * s * inv_diag_[i];
    };
    for (Eigen::Index i = 0; i < n; ++i) relax(i);
    for (Eigen::Index i = n - 1; i >= 0; --i) relax(i);
    return;
  }
  Vector r = b - a * x;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!mask_[i]) r[i] = 0.0;
  if (effective_ == SmootherKind::RichardsonIlu0) {
    ilu_.solve(r);
  } else {
    r = r.cwiseProduct(inv_diag_);
  }
  x += omega_ * r;
}

}  // namespace hmg
