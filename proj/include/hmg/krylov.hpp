#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hmg/sparse.hpp"

namespace hmg {

class MgHierarchy;

// z = M⁻¹ r
using Preconditioner = std::function<void(const Vector& r, Vector& z)>;

struct SolveReport {
  std::string method;                    // stationary | pcg | gmres
  std::string norm;                      // norm used for n10 and the stopping test
  int iterations = 0;
  std::vector<double> residual_history;  // ‖b − A x_i‖₂
  std::vector<double> monitor_history;   // the norm used for stopping, per iteration
  std::vector<double> update_history;    // stationary: ‖ŵ_i‖₂
  int n10 = -1;                          // first i with monitor reduction ≥ 1e10, -1 if never
  double rbar = 0.0;                     // (1/n) log10(m_0 / m_n)
  bool converged = false;
  bool breakdown = false;
  double wall_time = 0.0;
  int dofs = 0;
  Vector solution;
};

// (1/n) log10(h_0 / h_n) for n = history.size() - 1. Infinity when h_n == 0;
// zero when the history has a single entry.
double convergence_rate(const std::vector<double>& history);
// First index i with h_i <= factor * h_0, or -1.
int iterations_to_reduce(const std::vector<double>& history, double factor);

enum class MonitorNorm { Preconditioned, True };

// Steps 3–7 of the residual-correction loop: r = f − A u, ŵ = M r, u += ŵ,
// stop when ‖ŵ‖ ≤ eps.
SolveReport stationary(const CsrMatrix& a, const Vector& b, const Preconditioner& m, double eps, int max_it);

SolveReport pcg(const CsrMatrix& a, const Vector& b, const Preconditioner& m, double rtol, int max_it,
                MonitorNorm norm = MonitorNorm::Preconditioned);

// Right-preconditioned restarted GMRES; monitors the true residual.
SolveReport gmres(const CsrMatrix& a, const Vector& b, const Preconditioner& m, double rtol, int restart, int max_it);

Preconditioner vcycle_preconditioner(const MgHierarchy& h);
Preconditioner identity_preconditioner();

SolveReport stationary_solve(const MgHierarchy& h, const Vector& f, double eps, int max_it = 200);
SolveReport pcg_solve(const MgHierarchy& h, const Vector& f, double rtol, int max_it = 200,
                      MonitorNorm norm = MonitorNorm::Preconditioned);
SolveReport gmres_solve(const MgHierarchy& h, const Vector& f, double rtol, int restart = 30, int max_it = 200);

}  // namespace hmg
