#include "hmg/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace hmg {

namespace {

// Build a CSR matrix from per-row buffers that are already sorted by column.
CsrMatrix from_raw(int rows, int cols, const std::vector<int>& outer, const std::vector<int>& inner,
                   const std::vector<double>& vals) {
  CsrMatrix m(rows, cols);
  m.resizeNonZeros(static_cast<Eigen::Index>(vals.size()));
  std::copy(outer.begin(), outer.end(), m.outerIndexPtr());
  std::copy(inner.begin(), inner.end(), m.innerIndexPtr());
  std::copy(vals.begin(), vals.end(), m.valuePtr());
  return m;
}

template <typename Keep, typename Value>
CsrMatrix rebuild(const CsrMatrix& a, Keep keep, Value value, const Mask* unit_diag) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> outer(n + 1, 0);
  std::vector<int> inner;
  std::vector<double> vals;
  inner.reserve(a.nonZeros() + (unit_diag ? n : 0));
  vals.reserve(inner.capacity());
  for (int r = 0; r < n; ++r) {
    const bool want_diag = unit_diag && (*unit_diag)[r];
    bool diag_done = false;
    for (CsrMatrix::InnerIterator it(a, r); it; ++it) {
      const int c = static_cast<int>(it.col());
      if (want_diag && !diag_done && c >= r) {
        inner.push_back(r);
        vals.push_back(1.0);
        diag_done = true;
        if (c == r) continue;
      }
      if (!keep(r, c)) continue;
      const double v = value(r, c, it.value());
      if (v == 0.0) continue;
      inner.push_back(c);
      vals.push_back(v);
    }
    if (want_diag && !diag_done) {
      inner.push_back(r);
      vals.push_back(1.0);
    }
    outer[r + 1] = static_cast<int>(inner.size());
  }
  return from_raw(n, static_cast<int>(a.cols()), outer, inner, vals);
}

}  // namespace

CsrMatrix csr_from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
  CsrMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return drop_exact_zeros(m);
}

CsrMatrix drop_exact_zeros(const CsrMatrix& a) {
  CsrMatrix m = a;
  m.makeCompressed();
  m.prune([](const Eigen::Index&, const Eigen::Index&, const double& v) { return v != 0.0; });
  return m;
}

CsrMatrix constrain_unit_diagonal(const CsrMatrix& a, const Mask& mask) {
  if (a.rows() != a.cols()) throw std::invalid_argument("constrain_unit_diagonal: matrix not square");
  if (static_cast<Eigen::Index>(mask.size()) != a.rows())
    throw std::invalid_argument("constrain_unit_diagonal: mask size mismatch");
  CsrMatrix c = a;
  c.makeCompressed();
  return rebuild(
      c, [&](int r, int col) { return !mask[r] && !mask[col]; },
      [](int, int, double v) { return v; }, &mask);
}

CsrMatrix zero_rows_cols(const CsrMatrix& a, const Mask& row_mask, const Mask& col_mask) {
  if (!row_mask.empty() && static_cast<Eigen::Index>(row_mask.size()) != a.rows())
    throw std::invalid_argument("zero_rows_cols: row mask size mismatch");
  if (!col_mask.empty() && static_cast<Eigen::Index>(col_mask.size()) != a.cols())
    throw std::invalid_argument("zero_rows_cols: column mask size mismatch");
  CsrMatrix c = a;
  c.makeCompressed();
  return rebuild(
      c,
      [&](int r, int col) {
        return (row_mask.empty() || !row_mask[r]) && (col_mask.empty() || !col_mask[col]);
      },
      [](int, int, double v) { return v; }, nullptr);
}

CsrMatrix transpose(const CsrMatrix& a) {
  CsrMatrix t = a.transpose();
  t.makeCompressed();
  return t;
}

CsrMatrix triple_product(const CsrMatrix& p, const CsrMatrix& a) {
  if (a.rows() != a.cols() || p.rows() != a.rows())
    throw std::invalid_argument("triple_product: dimension mismatch");
  const CsrMatrix ap = a * p;
  const CsrMatrix pt = transpose(p);
  CsrMatrix r = pt * ap;
  return drop_exact_zeros(r);
}

double max_abs(const CsrMatrix& a) {
  double m = 0.0;
  for (int r = 0; r < a.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(a, r); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double max_abs_diff(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  const CsrMatrix d = a - b;
  return max_abs(d);
}

double symmetry_defect(const CsrMatrix& a) {
  const CsrMatrix t = transpose(a);
  return max_abs_diff(a, t);
}

Vector diagonal(const CsrMatrix& a) {
  Vector d = Vector::Zero(std::min(a.rows(), a.cols()));
  for (int r = 0; r < d.size(); ++r)
    for (CsrMatrix::InnerIterator it(a, r); it; ++it)
      if (it.col() == r) d[r] = it.value();
  return d;
}

void apply_mask_zero(Vector& v, const Mask& mask) {
  if (static_cast<Eigen::Index>(mask.size()) != v.size())
    throw std::invalid_argument("apply_mask_zero: size mismatch");
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (mask[i]) v[i] = 0.0;
}

DenseMatrix dense_submatrix(const CsrMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> col_pos(a.cols(), -1);
  for (std::size_t j = 0; j < cols.size(); ++j) col_pos[cols[j]] = static_cast<int>(j);
  DenseMatrix d = DenseMatrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (CsrMatrix::InnerIterator it(a, rows[i]); it; ++it) {
      const int j = col_pos[it.col()];
      if (j >= 0) d(static_cast<Eigen::Index>(i), j) = it.value();
    }
  return d;
}

std::vector<int> indices_where(const Mask& mask, bool value) {
  std::vector<int> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (static_cast<bool>(mask[i]) == value) out.push_back(static_cast<int>(i));
  return out;
}

void write_matrix_market(std::ostream& os, const CsrMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  os << std::setprecision(17);
  for (int r = 0; r < a.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(a, r); it; ++it)
      os << (r + 1) << ' ' << (it.col() + 1) << ' ' << it.value() << '\n';
}

std::vector<int> reverse_cuthill_mckee(const CsrMatrix& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("reverse_cuthill_mckee: matrix not square");
  // adjacency of A + A^T without the diagonal
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (CsrMatrix::InnerIterator it(a, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (j == i || it.value() == 0.0) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  std::vector<int> degree(n);
  for (int i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
    degree[i] = static_cast<int>(adj[i].size());
  }
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  std::vector<int> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), 0);
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](int x, int y) { return degree[x] < degree[y]; });

  std::vector<int> stamp(n, -1);
  int visit = 0;
  // Cuthill-McKee BFS from root into `out`; returns the number of levels and
  // a minimum-degree node of the last level.
  auto bfs = [&](int root, std::vector<int>& out) {
    const int id = visit++;
    out.assign(1, root);
    stamp[root] = id;
    std::size_t begin = 0;
    int levels = 0;
    int far = root;
    std::vector<int> nb;
    while (begin < out.size()) {
      const std::size_t end = out.size();
      ++levels;
      far = out[begin];
      for (std::size_t q = begin; q < end; ++q)
        if (degree[out[q]] < degree[far]) far = out[q];
      for (std::size_t q = begin; q < end; ++q) {
        nb.clear();
        for (int w : adj[out[q]])
          if (stamp[w] != id) {
            stamp[w] = id;
            nb.push_back(w);
          }
        std::stable_sort(nb.begin(), nb.end(), [&](int x, int y) { return degree[x] < degree[y]; });
        out.insert(out.end(), nb.begin(), nb.end());
      }
      begin = end;
    }
    return std::pair<int, int>{levels, far};
  };

  std::vector<int> comp;
  for (int start : by_degree) {
    if (seen[start]) continue;
    if (degree[start] == 0) {
      seen[start] = 1;
      order.push_back(start);
      continue;
    }
    // move the root towards a pseudo-peripheral node
    int root = start;
    auto [levels, far] = bfs(root, comp);
    for (int sweep = 0; sweep < 4; ++sweep) {
      auto [l2, f2] = bfs(far, comp);
      if (l2 <= levels) break;
      root = far;
      levels = l2;
      far = f2;
    }
    bfs(root, comp);
    for (int v : comp) seen[v] = 1;
    order.insert(order.end(), comp.begin(), comp.end());
  }
  std::reverse(order.begin(), order.end());
  return order;
}

CsrMatrix permute_symmetric(const CsrMatrix& a, const std::vector<int>& perm) {
  const int n = static_cast<int>(a.rows());
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permute_symmetric: size mismatch");
  std::vector<int> inv(n, -1);
  for (int i = 0; i < n; ++i) inv[perm[i]] = i;
  std::vector<Triplet> t;
  t.reserve(a.nonZeros());
  for (int i = 0; i < n; ++i)
    for (CsrMatrix::InnerIterator it(a, i); it; ++it) t.emplace_back(inv[i], inv[it.col()], it.value());
  CsrMatrix b(n, n);
  b.setFromTriplets(t.begin(), t.end());
  return b;
}

}  // namespace hmg
