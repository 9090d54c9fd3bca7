#include "hmg/report.hpp"

#include <cmath>
#include <iomanip>
#include <locale>
#include <sstream>

namespace hmg {

namespace {

Json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string norm_name(MonitorNorm n) { return n == MonitorNorm::Preconditioned ? "preconditioned" : "true"; }

}  // namespace

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(10) << v;
  return os.str();
}

Json config_json(const RunConfig& c) {
  Json j;
  j["strategy"] = strategy_name(c.strategy);
  j["levels"] = c.levels;
  j["family"] = family_name(c.family);
  j["smoother"] = smoother_name(c.smoother);
  j["omega"] = c.omega;
  j["nu_pre"] = c.nu_pre;
  j["nu_post"] = c.nu_post;
  j["rtol"] = c.rtol;
  j["eps"] = c.eps;
  j["seed"] = c.seed;
  j["mesh"] = c.mesh;
  j["krylov"] = c.krylov;
  j["mode"] = mode_name(c.mode);
  j["norm"] = norm_name(c.norm);
  j["ordering"] = ordering_name(c.ordering);
  return j;
}

Json solve_json(const SolveReport& r, const RunConfig& c, int level) {
  Json j;
  j["config"] = config_json(c);
  j["level"] = level;
  j["method"] = r.method;
  j["norm"] = r.norm;
  j["dofs"] = r.dofs;
  j["iterations"] = r.iterations;
  j["n10"] = r.n10;
  j["rbar"] = number_or_null(r.rbar);
  j["converged"] = r.converged;
  j["breakdown"] = r.breakdown;
  j["wall_time"] = r.wall_time;
  j["monitor_history"] = r.monitor_history;
  j["residual_history"] = r.residual_history;
  if (!r.update_history.empty()) j["update_history"] = r.update_history;
  return j;
}

std::string solve_csv_header() {
  return "strategy,family,level,method,norm,dofs,iterations,n10,rbar,converged,wall_time";
}

std::string solve_csv_row(const SolveReport& r, const RunConfig& c, int level) {
  std::ostringstream os;
  os << strategy_name(c.strategy) << ',' << family_name(c.family) << ',' << level << ',' << r.method << ','
     << r.norm << ',' << r.dofs << ',' << r.iterations << ',' << r.n10 << ',' << csv_number(r.rbar) << ','
     << (r.converged ? 1 : 0) << ',' << csv_number(r.wall_time);
  return os.str();
}

Json mesh_summary_json(const HierarchicalMesh& mesh) {
  Json j;
  j["family"] = family_name(mesh.family());
  j["num_levels"] = mesh.num_levels();
  Json levels = Json::array();
  for (int k = 0; k < mesh.num_levels(); ++k) {
    const MeshLevel& l = mesh.level(k);
    Json e;
    e["level"] = k;
    e["elements"] = l.elements.size();
    e["nodes"] = l.num_nodes();
    e["interior"] = l.count(NodeTag::Interior);
    e["master"] = l.count(NodeTag::Master);
    e["hanging"] = l.count(NodeTag::Hanging);
    e["dirichlet"] = l.count_dirichlet();
    e["max_depth"] = l.max_depth;
    levels.push_back(e);
  }
  j["levels"] = levels;
  return j;
}

std::string bench_csv_header() {
  return "strategy,family,level,nodes,dofs,hanging,iterations,n10,rbar,converged,setup_time,solve_time,time,"
         "exponent,flag";
}

void write_bench_csv(std::ostream& out, const BenchTable& t) {
  out << bench_csv_header() << '\n';
  const std::string strat = strategy_name(t.spec.strategy);
  const std::string fam = family_name(t.spec.family);
  for (const BenchRow& r : t.rows)
    out << strat << ',' << fam << ',' << r.level << ',' << r.nodes << ',' << r.dofs << ',' << r.hanging << ','
        << r.iterations << ',' << r.n10 << ',' << csv_number(r.rbar) << ',' << (r.converged ? 1 : 0) << ','
        << csv_number(r.setup_time) << ',' << csv_number(r.solve_time) << ',' << csv_number(r.time) << ','
        << csv_number(r.exponent) << ',' << r.flag << '\n';
}

Json bench_json(const BenchTable& t) {
  Json j;
  j["strategy"] = strategy_name(t.spec.strategy);
  j["family"] = family_name(t.spec.family);
  j["smoother"] = smoother_name(t.spec.mg.smoother);
  j["omega"] = t.spec.mg.omega;
  j["nu"] = t.spec.mg.nu_pre;
  j["rtol"] = t.spec.rtol;
  j["norm"] = norm_name(t.spec.norm);
  j["all_converged"] = t.all_converged();
  Json rows = Json::array();
  for (const BenchRow& r : t.rows) {
    Json e;
    e["level"] = r.level;
    e["nodes"] = r.nodes;
    e["dofs"] = r.dofs;
    e["hanging"] = r.hanging;
    e["iterations"] = r.iterations;
    e["n10"] = r.n10;
    e["rbar"] = number_or_null(r.rbar);
    e["converged"] = r.converged;
    e["setup_time"] = r.setup_time;
    e["solve_time"] = r.solve_time;
    e["time"] = r.time;
    e["exponent"] = number_or_null(r.exponent);
    e["flag"] = r.flag;
    e["history"] = r.history;
    rows.push_back(e);
  }
  j["rows"] = rows;
  return j;
}

std::string spectrum_csv_header() { return "method,level,element,nu,rho,dofs,seed,iterations,converged,residual"; }

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumReport>& rows) {
  out << spectrum_csv_header() << '\n';
  for (const SpectrumReport& r : rows)
    out << r.method << ',' << r.level << ',' << r.element << ',' << r.nu << ',' << csv_number(r.rho) << ','
        << r.dofs << ',' << r.seed << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
        << csv_number(r.residual) << '\n';
}

Json spectrum_json(const std::vector<SpectrumReport>& rows) {
  Json arr = Json::array();
  for (const SpectrumReport& r : rows) {
    Json e;
    e["method"] = r.method;
    e["level"] = r.level;
    e["element"] = r.element;
    e["nu"] = r.nu;
    e["rho"] = r.rho;
    e["dofs"] = r.dofs;
    e["seed"] = r.seed;
    e["iterations"] = r.iterations;
    e["converged"] = r.converged;
    e["residual"] = r.residual;
    e["materialized"] = r.materialized;
    arr.push_back(e);
  }
  return arr;
}

}  // namespace hmg
