#include <algorithm>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "hmg/sparse.hpp"

using namespace hmg;

namespace {

// 1D Laplacian tridiag(-1, 2, -1).
CsrMatrix laplace1d(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
  }
  return csr_from_triplets(n, n, t);
}

int bandwidth(const CsrMatrix& a) {
  int bw = 0;
  for (int r = 0; r < a.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(a, r); it; ++it) bw = std::max(bw, std::abs(static_cast<int>(it.col()) - r));
  return bw;
}

}  // namespace

TEST_CASE("triplet assembly sums duplicates and drops exact zeros") {
  const CsrMatrix a = csr_from_triplets(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}, {0, 1, 1.0}, {0, 1, -1.0}, {1, 1, 4.0}});
  CHECK(a.coeff(0, 0) == 3.0);
  CHECK(a.coeff(1, 1) == 4.0);
  CHECK(a.nonZeros() == 2);
}

TEST_CASE("unit-diagonal constraint zeroes rows and columns") {
  const CsrMatrix a = laplace1d(4);
  const CsrMatrix b = constrain_unit_diagonal(a, {0, 1, 0, 0});
  CHECK(b.coeff(1, 1) == 1.0);
  CHECK(b.coeff(0, 1) == 0.0);
  CHECK(b.coeff(1, 2) == 0.0);
  CHECK(b.coeff(2, 3) == -1.0);
  CHECK(symmetry_defect(b) == 0.0);

  const CsrMatrix c = zero_rows_cols(a, {1, 0, 0, 0}, {});
  CHECK(c.coeff(0, 0) == 0.0);
  CHECK(c.coeff(1, 0) == -1.0);
}

TEST_CASE("triple product matches the dense formula") {
  const CsrMatrix a = laplace1d(5);
  const CsrMatrix p = csr_from_triplets(5, 2, {{0, 0, 1}, {1, 0, .5}, {1, 1, .5}, {2, 1, 1}, {3, 1, .25}, {4, 0, 2}});
  const DenseMatrix want = DenseMatrix(p).transpose() * DenseMatrix(a) * DenseMatrix(p);
  CHECK((DenseMatrix(triple_product(p, a)) - want).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(max_abs_diff(transpose(p), CsrMatrix(p.transpose())) == 0.0);
}

TEST_CASE("diagonal, masks and index helpers") {
  const CsrMatrix a = laplace1d(3);
  CHECK(diagonal(a).isApprox(Vector::Constant(3, 2.0)));
  Vector v = Vector::Ones(3);
  apply_mask_zero(v, {1, 0, 1});
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 1.0);
  CHECK(indices_where({1, 0, 1}, true) == std::vector<int>{0, 2});
  CHECK(indices_where({1, 0, 1}, false) == std::vector<int>{1});
  const DenseMatrix s = dense_submatrix(a, {0, 2}, {1, 2});
  CHECK(s(0, 0) == -1.0);
  CHECK(s(1, 1) == 2.0);
  CHECK(max_abs(a) == 2.0);
}

TEST_CASE("matrix market output lists one-based entries") {
  std::ostringstream os;
  write_matrix_market(os, laplace1d(2));
  const std::string s = os.str();
  CHECK(s.rfind("%%MatrixMarket", 0) == 0);
  CHECK(s.find("2 2 4") != std::string::npos);
  CHECK(s.find("1 2 -1") != std::string::npos);
}

TEST_CASE("reverse Cuthill-McKee recovers a narrow band from a shuffled path") {
  const int n = 60;
  const CsrMatrix a = laplace1d(n);
  std::vector<int> shuffle(n);
  std::iota(shuffle.begin(), shuffle.end(), 0);
  for (int i = 0; i < n; ++i) std::swap(shuffle[i], shuffle[(i * 37 + 11) % n]);
  const CsrMatrix scrambled = permute_symmetric(a, shuffle);
  CHECK(bandwidth(scrambled) > 5);

  const std::vector<int> perm = reverse_cuthill_mckee(scrambled);
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> ident(n);
  std::iota(ident.begin(), ident.end(), 0);
  CHECK(sorted == ident);
  CHECK(bandwidth(permute_symmetric(scrambled, perm)) == 1);
}

TEST_CASE("reverse Cuthill-McKee keeps isolated nodes and disconnected parts") {
  std::vector<Triplet> t{{0, 0, 1}, {1, 1, 2}, {1, 3, -1}, {3, 1, -1}, {3, 3, 2}, {2, 2, 1}, {4, 4, 1}};
  const CsrMatrix a = csr_from_triplets(5, 5, t);
  std::vector<int> perm = reverse_cuthill_mckee(a);
  CHECK(perm.size() == 5u);
  std::sort(perm.begin(), perm.end());
  CHECK(perm == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("symmetric permutation preserves the spectrum") {
  const CsrMatrix a = laplace1d(6);
  const std::vector<int> perm{5, 3, 1, 0, 2, 4};
  const CsrMatrix b = permute_symmetric(a, perm);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(b.coeff(i, j) == a.coeff(perm[i], perm[j]));
  const DenseMatrix da(a), db(b);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> ea(da), eb(db);
  CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-13);
}
