#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hmg {

// Row-major compressed sparse storage (CSR semantics: outer = row offsets).
using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Triplet = Eigen::Triplet<double, int>;
using Mask = std::vector<std::uint8_t>;

// Sums duplicate entries and drops entries that are exactly zero.
CsrMatrix csr_from_triplets(int rows, int cols, const std::vector<Triplet>& triplets);

// Removes stored entries that are exactly zero.
CsrMatrix drop_exact_zeros(const CsrMatrix& a);

// Zeroes every row and column flagged in `mask` and places 1 on the diagonal of
// flagged rows. The matrix must be square.
CsrMatrix constrain_unit_diagonal(const CsrMatrix& a, const Mask& mask);

// Zeroes the flagged rows (row_mask) and columns (col_mask); either may be empty.
CsrMatrix zero_rows_cols(const CsrMatrix& a, const Mask& row_mask, const Mask& col_mask);

// Pᵀ A P, computed as two sparse products.
CsrMatrix triple_product(const CsrMatrix& p, const CsrMatrix& a);

CsrMatrix transpose(const CsrMatrix& a);

double max_abs(const CsrMatrix& a);
double max_abs_diff(const CsrMatrix& a, const CsrMatrix& b);
// max |A - Aᵀ| over stored entries of either.
double symmetry_defect(const CsrMatrix& a);

Vector diagonal(const CsrMatrix& a);

// Zero entries of v flagged in mask.
void apply_mask_zero(Vector& v, const Mask& mask);

// Restrict a matrix to the rows/cols where `keep` is set, as a dense matrix.
DenseMatrix dense_submatrix(const CsrMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols);

std::vector<int> indices_where(const Mask& mask, bool value);

void write_matrix_market(std::ostream& os, const CsrMatrix& a);

// Reverse Cuthill-McKee ordering of the (symmetrised) graph of a; entry i of
// the result is the original index placed at position i.
std::vector<int> reverse_cuthill_mckee(const CsrMatrix& a);
// B(i, j) = A(perm[i], perm[j]).
CsrMatrix permute_symmetric(const CsrMatrix& a, const std::vector<int>& perm);

}  // namespace hmg
