#include "hmg/krylov.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hmg/multigrid.hpp"

namespace hmg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void finish(SolveReport& rep) {
  rep.iterations = static_cast<int>(rep.monitor_history.size()) - 1;
  rep.n10 = iterations_to_reduce(rep.monitor_history, 1e-10);
  rep.rbar = convergence_rate(rep.monitor_history);
}

void check_sizes(const CsrMatrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw std::invalid_argument("solver: size mismatch");
}

}  // namespace

double convergence_rate(const std::vector<double>& h) {
  if (h.size() < 2) return 0.0;
  const double n = static_cast<double>(h.size() - 1);
  if (h.back() == 0.0) return std::numeric_limits<double>::infinity();
  if (h.front() == 0.0) return 0.0;
  return std::log10(h.front() / h.back()) / n;
}

int iterations_to_reduce(const std::vector<double>& h, double factor) {
  if (h.empty()) return -1;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] <= factor * h.front()) return static_cast<int>(i);
  return -1;
}

SolveReport stationary(const CsrMatrix& a, const Vector& b, const Preconditioner& m, double eps, int max_it) {
  check_sizes(a, b);
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.method = "stationary";
  rep.norm = "true";
  rep.dofs = static_cast<int>(b.size());
  Vector u = Vector::Zero(b.size());
  Vector w(b.size());
  Vector r = b;
  rep.residual_history.push_back(r.norm());
  rep.monitor_history.push_back(r.norm());
  for (int it = 0; it < max_it; ++it) {
    m(r, w);
    u += w;
    const double wn = w.norm();
    rep.update_history.push_back(wn);
    r = b - a * u;
    rep.residual_history.push_back(r.norm());
    rep.monitor_history.push_back(r.norm());
    if (!std::isfinite(wn)) {
      rep.breakdown = true;
      break;
    }
    if (wn <= eps) {
      rep.converged = true;
      break;
    }
  }
  rep.solution = std::move(u);
  finish(rep);
  rep.wall_time = seconds_since(t0);
  return rep;
}

SolveReport pcg(const CsrMatrix& a, const Vector& b, const Preconditioner& m, double rtol, int max_it,
                MonitorNorm norm) {
  check_sizes(a, b);
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.method = "pcg";
  rep.norm = norm == MonitorNorm::Preconditioned ? "preconditioned" : "true";
  rep.dofs = static_cast<int>(b.size());
  Vector x = Vector::Zero(b.size());
  Vector r = b;
  Vector z(b.size());
  m(r, z);
  auto monitor = [&](const Vector& rr, const Vector& zz) {
    return norm == MonitorNorm::Preconditioned ? zz.norm() : rr.norm();
  };
  rep.residual_history.push_back(r.norm());
  rep.monitor_history.push_back(monitor(r, z));
  const double m0 = rep.monitor_history.front();
  if (m0 == 0.0 || rtol >= 1.0) {
    rep.converged = true;
    rep.solution = x;
    finish(rep);
    rep.wall_time = seconds_since(t0);
    return rep;
  }
  Vector p = z;
  double rz = r.dot(z);
  const double tiny = 1e-300;
  for (int it = 0; it < max_it; ++it) {
    const Vector ap = a * p;
    const double pap = p.dot(ap);
    if (!(std::abs(pap) > tiny) || !(std::abs(rz) > tiny)) {
      rep.breakdown = true;
      break;
    }
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    m(r, z);
    rep.residual_history.push_back(r.norm());
    rep.monitor_history.push_back(monitor(r, z));
    if (rep.monitor_history.back() <= rtol * m0) {
      rep.converged = true;
      break;
    }
    const double rz_new = r.dot(z);
    const double beta = rz_new / rz;
    rz = rz_new;
    p = z + beta * p;
  }
  rep.solution = std::move(x);
  finish(rep);
  rep.wall_time = seconds_since(t0);
  return rep;
}

SolveReport gmres(const CsrMatrix& a, const Vector& b, const Preconditioner& m, double rtol, int restart, int max_it) {
  check_sizes(a, b);
  if (restart < 1) throw std::invalid_argument("gmres: restart must be positive");
  const auto t0 = Clock::now();
  SolveReport rep;
  rep.method = "gmres";
  rep.norm = "true";
  rep.dofs = static_cast<int>(b.size());
  const Eigen::Index n = b.size();
  Vector x = Vector::Zero(n);
  Vector r = b;
  double beta = r.norm();
  rep.residual_history.push_back(beta);
  rep.monitor_history.push_back(beta);
  const double r0 = beta;
  if (r0 == 0.0) {
    rep.converged = true;
    rep.solution = x;
    finish(rep);
    rep.wall_time = seconds_since(t0);
    return rep;
  }
  int total = 0;
  while (total < max_it && !rep.converged && !rep.breakdown) {
    const int mdim = std::min(restart, max_it - total);
    DenseMatrix V(n, mdim + 1), Z(n, mdim);
    DenseMatrix H = DenseMatrix::Zero(mdim + 1, mdim);
    Vector cs = Vector::Zero(mdim), sn = Vector::Zero(mdim), g = Vector::Zero(mdim + 1);
    V.col(0) = r / beta;
    g[0] = beta;
    int j = 0;
    for (; j < mdim; ++j) {
      Vector zj(n);
      m(V.col(j), zj);
      Z.col(j) = zj;
      Vector w = a * zj;
      for (int i = 0; i <= j; ++i) {
        H(i, j) = w.dot(V.col(i));
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double d = std::hypot(H(j, j), H(j + 1, j));
      if (d == 0.0) {
        rep.breakdown = true;
        break;
      }
      cs[j] = H(j, j) / d;
      sn[j] = H(j + 1, j) / d;
      H(j, j) = d;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++total;
      const double res = std::abs(g[j + 1]);
      rep.monitor_history.push_back(res);
      rep.residual_history.push_back(res);
      const bool lucky = H.col(j).norm() > 0 && w.norm() <= 1e-14 * d;
      if (res <= rtol * r0 || lucky) {
        rep.converged = res <= rtol * r0;
        ++j;
        break;
      }
      V.col(j + 1) = w / w.norm();
    }
    const int k = std::min(j, mdim);
    if (k > 0) {
      const Vector y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
      x += Z.leftCols(k) * y;
    }
    r = b - a * x;
    beta = r.norm();
    if (!rep.residual_history.empty()) rep.residual_history.back() = beta;
    if (beta <= rtol * r0) rep.converged = true;
    if (beta == 0.0) break;
  }
  rep.solution = std::move(x);
  finish(rep);
  rep.wall_time = seconds_since(t0);
  return rep;
}

Preconditioner vcycle_preconditioner(const MgHierarchy& h) {
  return [&h](const Vector& r, Vector& z) { z = h.vcycle(r); };
}

Preconditioner identity_preconditioner() {
  return [](const Vector& r, Vector& z) { z = r; };
}

SolveReport stationary_solve(const MgHierarchy& h, const Vector& f, double eps, int max_it) {
  return stationary(h.matrix(), f, vcycle_preconditioner(h), eps, max_it);
}

SolveReport pcg_solve(const MgHierarchy& h, const Vector& f, double rtol, int max_it, MonitorNorm norm) {
  return pcg(h.matrix(), f, vcycle_preconditioner(h), rtol, max_it, norm);
}

SolveReport gmres_solve(const MgHierarchy& h, const Vector& f, double rtol, int restart, int max_it) {
  return gmres(h.matrix(), f, vcycle_preconditioner(h), rtol, restart, max_it);
}

}  // namespace hmg
