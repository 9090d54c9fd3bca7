#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hmg/krylov.hpp"
#include "hmg/markers.hpp"
#include "hmg/mesh.hpp"
#include "hmg/multigrid.hpp"

namespace hmg {

struct BenchCase {
  Strategy strategy = Strategy::Quadrant;
  FeFamily family{Shape::Quad, 1};
  int min_level = 3;
  int max_level = 10;
  MgOptions mg;                 // defaults: Richardson/ILU(0), omega 0.8, one pre and one post step
  double rtol = 1e-10;
  int max_it = 200;
  MonitorNorm norm = MonitorNorm::Preconditioned;
};

struct BenchRow {
  int level = 0;
  int nodes = 0;
  int dofs = 0;                 // free dofs: interior and master nodes not on the Dirichlet boundary
  int hanging = 0;
  int iterations = 0;
  int n10 = -1;
  double rbar = 0.0;
  bool converged = false;
  double setup_time = 0.0;
  double solve_time = 0.0;
  double time = 0.0;            // setup + solve
  double exponent = 0.0;        // against the previous row; NaN on the first row
  std::string flag;             // empty, "zero-iterations", "not-converged" or "breakdown"
  std::vector<double> history;  // monitor norm per iteration
};

struct BenchTable {
  BenchCase spec;
  std::vector<BenchRow> rows;
  bool all_converged() const;
};

// [-1,1]^2 split into 2x2 cells (triangles for simplicial families).
CoarseMesh bench_coarse_mesh(FeFamily family);

// Invoked once per row with the level and the nodal solution.
using BenchRowHook = std::function<void(const MeshLevel&, const Vector& nodal)>;

BenchTable run_poisson_bench(const BenchCase& c, const BenchRowHook& hook = {});

// ln(t1/t0) / ln(n1/n0).
double complexity_exponent(double t0, double t1, double n0, double n1);

}  // namespace hmg
