#include "hmg/bench.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hmg/assembly.hpp"

namespace hmg {

bool BenchTable::all_converged() const {
  for (const BenchRow& r : rows)
    if (!r.converged) return false;
  return true;
}

CoarseMesh bench_coarse_mesh(FeFamily family) { return rectangle_mesh(family, 2, 2, -1.0, 1.0, -1.0, 1.0); }

double complexity_exponent(double t0, double t1, double n0, double n1) {
  if (!(t0 > 0.0) || !(t1 > 0.0) || !(n0 > 0.0) || !(n1 > 0.0))
    throw std::invalid_argument("complexity_exponent: inputs must be positive");
  if (n0 == n1) throw std::invalid_argument("complexity_exponent: equal dof counts");
  return std::log(t1 / t0) / std::log(n1 / n0);
}

BenchTable run_poisson_bench(const BenchCase& c, const BenchRowHook& hook) {
  if (c.max_level > 10 || c.min_level < 0 || c.min_level > c.max_level)
    throw std::invalid_argument("run_poisson_bench: need 0 <= min_level <= max_level <= 10");
  if (c.strategy == Strategy::Random || c.strategy == Strategy::RandomActive) throw std::invalid_argument("run_poisson_bench: strategy must be deterministic");
  using Clock = std::chrono::steady_clock;

  HierarchicalMesh mesh(bench_coarse_mesh(c.family));
  RefinementPlan plan;
  plan.strategy = c.strategy;
  plan.levels = c.max_level;
  plan.uniform_levels = 1;
  apply_plan(mesh, plan);

  BenchTable table;
  table.spec = c;
  const SourceFunction one = [](const Point&) { return 1.0; };
  for (int l = c.min_level; l <= c.max_level; ++l) {
    const MeshLevel& lvl = mesh.level(l);
    const auto t0 = Clock::now();
    const MgHierarchy h = MgHierarchy::build(mesh, l, assemble_poisson(lvl, one), c.mg);
    const auto t1 = Clock::now();
    const SolveReport rep = pcg_solve(h, h.rhs(), c.rtol, c.max_it, c.norm);
    const auto t2 = Clock::now();

    BenchRow row;
    row.level = l;
    row.nodes = static_cast<int>(lvl.coords.size());
    row.dofs = static_cast<int>(h.free_dofs().size());
    row.hanging = lvl.count(NodeTag::Hanging);
    row.iterations = rep.iterations;
    row.n10 = rep.n10;
    row.rbar = rep.rbar;
    row.converged = rep.converged;
    row.setup_time = std::chrono::duration<double>(t1 - t0).count();
    row.solve_time = std::chrono::duration<double>(t2 - t1).count();
    row.time = row.setup_time + row.solve_time;
    row.history = rep.monitor_history;
    if (rep.breakdown)
      row.flag = "breakdown";
    else if (!rep.converged)
      row.flag = "not-converged";
    else if (rep.iterations == 0)
      row.flag = "zero-iterations";
    if (table.rows.empty())
      row.exponent = std::numeric_limits<double>::quiet_NaN();
    else {
      const BenchRow& prev = table.rows.back();
      row.exponent = (prev.time > 0.0 && row.time > 0.0 && prev.dofs > 0 && row.dofs != prev.dofs)
                         ? complexity_exponent(prev.time, row.time, prev.dofs, row.dofs)
                         : std::numeric_limits<double>::quiet_NaN();
    }
    if (hook) hook(lvl, h.to_nodal(rep.solution));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace hmg
