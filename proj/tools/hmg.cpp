// Command-line front end: mesh, solve, spectrum and bench subcommands.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hmg/assembly.hpp"
#include "hmg/bench.hpp"
#include "hmg/config.hpp"
#include "hmg/krylov.hpp"
#include "hmg/mesh.hpp"
#include "hmg/mesh_io.hpp"
#include "hmg/multigrid.hpp"
#include "hmg/report.hpp"
#include "hmg/spectrum.hpp"

namespace fs = std::filesystem;
using namespace hmg;

namespace {

struct CommonArgs {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> levels;
  std::optional<std::string> strategy;
  std::optional<std::string> family;
  std::optional<std::string> smoother;
  std::optional<std::string> nu;
  std::optional<std::string> omega;
  std::optional<std::string> method;
  std::optional<std::string> mesh;
  std::vector<std::string> sets;
  bool verbose = false;
};

void add_common(CLI::App* app, CommonArgs& a) {
  app->add_option("--config", a.config, "key = value configuration file");
  app->add_option("--out", a.out, "output directory")->capture_default_str();
  app->add_option("--seed", a.seed, "random seed");
  app->add_option("--levels", a.levels, "finest level index");
  app->add_option("--strategy", a.strategy, "uniform | quadrant | circle | random | random-active");
  app->add_option("--family", a.family, "q1 | q2 | p1 | p2 | hex1 | hex2");
  app->add_option("--smoother", a.smoother, "ilu0 | jacobi | sgs");
  app->add_option("--nu", a.nu, "smoothing steps (comma list for spectrum)");
  app->add_option("--omega", a.omega, "damping factor");
  app->add_option("--method", a.method, "global | bpwx | bpwx-strict");
  app->add_option("--mesh", a.mesh, "coarse mesh file");
  app->add_option("--set", a.sets, "extra key=value overrides (repeatable)");
  app->add_flag("-v,--verbose", a.verbose, "progress output on stderr");
}

RunConfig resolve(const CommonArgs& a, bool nu_is_list) {
  RunConfig c;
  if (!a.config.empty()) c = load_config(a.config);
  if (a.seed) set_config_value(c, "seed", std::to_string(*a.seed));
  if (a.levels) set_config_value(c, "levels", std::to_string(*a.levels));
  if (a.strategy) set_config_value(c, "strategy", *a.strategy);
  if (a.family) set_config_value(c, "family", *a.family);
  if (a.smoother) set_config_value(c, "smoother", *a.smoother);
  if (a.omega) set_config_value(c, "omega", *a.omega);
  if (a.method) set_config_value(c, "mode", *a.method);
  if (a.mesh) set_config_value(c, "mesh", *a.mesh);
  if (a.nu) {
    if (nu_is_list) {
      set_config_value(c, "nus", *a.nu);
    } else {
      set_config_value(c, "nu_pre", *a.nu);
      set_config_value(c, "nu_post", *a.nu);
    }
  }
  for (const std::string& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return c;
}

CoarseMesh coarse_for(const RunConfig& c) {
  if (!c.mesh.empty()) return read_mesh_file(c.mesh);
  return bench_coarse_mesh(c.family);
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  return f;
}

int cmd_mesh(const CommonArgs& a) {
  const RunConfig c = resolve(a, false);
  HierarchicalMesh mesh(coarse_for(c));
  apply_plan(mesh, c.plan());
  for (int k = 0; k < mesh.num_levels(); ++k) {
    auto f = open_out(a.out, "mesh_level_" + std::to_string(k) + ".vtk");
    write_vtk(f, mesh.level(k), level_fields(mesh.level(k)), "hmg level " + std::to_string(k));
  }
  const Json summary = mesh_summary_json(mesh);
  open_out(a.out, "mesh_summary.json") << summary.dump(2) << '\n';
  for (const auto& l : summary["levels"])
    std::cout << "level " << l["level"] << ": elements " << l["elements"] << ", nodes " << l["nodes"]
              << ", I " << l["interior"] << ", M " << l["master"] << ", H " << l["hanging"] << '\n';
  return 0;
}

int cmd_solve(const CommonArgs& a) {
  const RunConfig c = resolve(a, false);
  HierarchicalMesh mesh(coarse_for(c));
  apply_plan(mesh, c.plan());
  const int level = c.levels;
  const SystemPair sys = assemble_poisson(mesh.level(level), [](const Point&) { return 1.0; });
  const MgHierarchy h = MgHierarchy::build(mesh, level, sys, c.mg_options());
  SolveReport rep;
  if (c.krylov == "stationary")
    rep = stationary_solve(h, h.rhs(), c.eps, c.max_it);
  else if (c.krylov == "gmres")
    rep = gmres_solve(h, h.rhs(), c.rtol, c.restart, c.max_it);
  else
    rep = pcg_solve(h, h.rhs(), c.rtol, c.max_it, c.norm);
  rep.dofs = static_cast<int>(h.free_dofs().size());

  open_out(a.out, "solve.json") << solve_json(rep, c, level).dump(2) << '\n';
  open_out(a.out, "solve.csv") << solve_csv_header() << '\n' << solve_csv_row(rep, c, level) << '\n';
  VtkFields fields = level_fields(mesh.level(level));
  const Vector u = h.to_nodal(rep.solution);
  fields.point_scalars["u"] = std::vector<double>(u.data(), u.data() + u.size());
  auto vtk = open_out(a.out, "solution.vtk");
  write_vtk(vtk, mesh.level(level), fields, "hmg solution");

  std::cout << rep.method << ": dofs " << rep.dofs << ", iterations " << rep.iterations << ", n10 " << rep.n10
            << ", rbar " << csv_number(rep.rbar) << (rep.converged ? ", converged" : ", NOT converged") << '\n';
  return rep.converged ? 0 : 1;
}

int cmd_spectrum(const CommonArgs& a) {
  const RunConfig c = resolve(a, true);
  SpectrumConfig s;
  if (c.has("family")) s.family = c.family;
  if (c.has("omega")) s.omega = c.omega;
  s.smoother = c.smoother;
  s.ordering = c.ordering;
  s.seed = c.seed;
  s.fraction = c.fraction;
  s.cap = c.cap;
  s.materialize = c.materialize;
  s.nus = c.nus;
  if (c.has("spectrum_levels")) s.levels = c.spectrum_levels;
  else if (c.has("levels")) s.levels = {c.levels};
  if (c.has("mode")) s.methods = {c.mode};
  const std::vector<SpectrumReport> rows = spectrum_sweep(s);
  {
    auto csv = open_out(a.out, "spectrum.csv");
    write_spectrum_csv(csv, rows);
  }
  open_out(a.out, "spectrum.json") << spectrum_json(rows).dump(2) << '\n';
  write_spectrum_csv(std::cout, rows);
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.converged;
  return ok ? 0 : 1;
}

int cmd_bench(const CommonArgs& a, bool vtk) {
  const RunConfig c = resolve(a, false);
  BenchCase bc;
  bc.strategy = c.strategy;
  bc.family = c.family;
  // Quadratic elements on quadrant or uniform meshes need more than 5 GB at level 10.
  const bool heavy = c.family.degree >= 2 && c.strategy != Strategy::Circle;
  bc.max_level = c.has("levels") ? c.levels : (heavy ? 9 : 10);
  bc.min_level = std::min(c.min_level, bc.max_level);
  bc.mg = c.mg_options();
  bc.rtol = c.rtol;
  bc.max_it = c.max_it;
  bc.norm = c.norm;
  BenchRowHook hook;
  if (vtk)
    hook = [&](const MeshLevel& lvl, const Vector& u) {
      VtkFields f = level_fields(lvl);
      f.point_scalars["u"] = std::vector<double>(u.data(), u.data() + u.size());
      auto out = open_out(a.out, "bench_level_" + std::to_string(lvl.index) + ".vtk");
      write_vtk(out, lvl, f, "hmg bench");
    };
  const BenchTable t = run_poisson_bench(bc, hook);
  {
    auto csv = open_out(a.out, "bench.csv");
    write_bench_csv(csv, t);
  }
  open_out(a.out, "bench.json") << bench_json(t).dump(2) << '\n';
  write_bench_csv(std::cout, t);
  return t.all_converged() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hmg: adaptive finite elements with hanging-node multigrid"};
  app.require_subcommand(1);
  CommonArgs mesh_args, solve_args, spec_args, bench_args;
  bool bench_vtk = false;
  auto* m = app.add_subcommand("mesh", "refine a coarse mesh and write per-level VTK plus a node summary");
  add_common(m, mesh_args);
  auto* s = app.add_subcommand("solve", "assemble and solve the Poisson problem on the finest level");
  add_common(s, solve_args);
  auto* p = app.add_subcommand("spectrum", "spectral radius of the V-cycle error operator");
  add_common(p, spec_args);
  auto* b = app.add_subcommand("bench", "Poisson benchmark table over levels");
  add_common(b, bench_args);
  b->add_flag("--vtk", bench_vtk, "write the solution of every row");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (m->parsed()) return cmd_mesh(mesh_args);
    if (s->parsed()) return cmd_solve(solve_args);
    if (p->parsed()) return cmd_spectrum(spec_args);
    if (b->parsed()) return cmd_bench(bench_args, bench_vtk);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const MeshError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
