#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hmg/config.hpp"
#include "hmg/report.hpp"

using namespace hmg;

TEST_CASE("config files set known keys and record them") {
  std::istringstream in(
      "# solver settings\n"
      "strategy = circle\n"
      "levels = 5   # trailing comment\n"
      "family = biquadratic\n"
      "smoother = sgs\n"
      "omega = 0.7\n"
      "mode = bpwx\n"
      "norm = true\n"
      "nus = 1, 3\n"
      "ordering = rcm\n"
      "materialize = false\n");
  const RunConfig c = parse_config(in);
  CHECK(c.strategy == Strategy::Circle);
  CHECK(c.levels == 5);
  CHECK(c.family == FeFamily{Shape::Quad, 2});
  CHECK(c.smoother == SmootherKind::SymGaussSeidel);
  CHECK(c.omega == doctest::Approx(0.7));
  CHECK(c.mode == SmoothingMode::Bpwx);
  CHECK(c.norm == MonitorNorm::True);
  CHECK(c.nus == std::vector<int>{1, 3});
  CHECK(c.ordering == IluOrdering::Rcm);
  CHECK(!c.materialize);
  CHECK(c.has("omega"));
  CHECK(!c.has("seed"));

  const MgOptions o = c.mg_options();
  CHECK(o.smoother == SmootherKind::SymGaussSeidel);
  CHECK(o.mode == SmoothingMode::Bpwx);
  CHECK(o.ordering == IluOrdering::Rcm);
  const RefinementPlan p = c.plan();
  CHECK(p.strategy == Strategy::Circle);
  CHECK(p.levels == 5);
}

TEST_CASE("bad config input throws ConfigError") {
  RunConfig c;
  CHECK_THROWS_AS(set_config_value(c, "colour", "red"), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "levels", "three"), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "levels", "-1"), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "fraction", "1.5"), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "krylov", "bicgstab"), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "family", "q7"), ConfigError);
  CHECK_THROWS_AS(set_config_value(c, "max_it", "0"), ConfigError);
  std::istringstream no_eq("levels 3\n");
  CHECK_THROWS_AS(parse_config(no_eq), ConfigError);
  std::istringstream empty_value("levels =\n");
  CHECK_THROWS_AS(parse_config(empty_value), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("every advertised key is accepted") {
  const std::map<std::string, std::string> sample{
      {"strategy", "uniform"}, {"levels", "2"},       {"family", "p1"},    {"smoother", "jacobi"},
      {"omega", "0.5"},        {"nu_pre", "2"},       {"nu_post", "0"},    {"rtol", "1e-8"},
      {"eps", "1e-9"},         {"seed", "7"},         {"mesh", "m.txt"},   {"krylov", "gmres"},
      {"mode", "global"},      {"norm", "preconditioned"}, {"uniform_levels", "2"}, {"fraction", "0.25"},
      {"min_level", "1"},      {"max_it", "50"},      {"restart", "10"},   {"spectrum_levels", "3,4"},
      {"nus", "2"},            {"cap", "100"},        {"materialize", "true"}, {"ordering", "natural"}};
  for (const std::string& k : config_keys()) {
    CAPTURE(k);
    REQUIRE(sample.count(k) == 1);
    RunConfig c;
    CHECK_NOTHROW(set_config_value(c, k, sample.at(k)));
  }
  CHECK(sample.size() == config_keys().size());
}

TEST_CASE("load_config reads from disk on top of a base") {
  const std::string path = "test_config_tmp.cfg";
  {
    std::ofstream f(path);
    f << "seed = 99\n";
  }
  RunConfig base;
  base.levels = 7;
  const RunConfig c = load_config(path, base);
  std::remove(path.c_str());
  CHECK(c.seed == 99u);
  CHECK(c.levels == 7);
}

TEST_CASE("report helpers produce stable CSV and JSON") {
  CHECK(csv_number(0.5) == "0.5");
  CHECK(csv_number(1e-10) == "1e-10");
  CHECK(csv_number(std::nan("")) == "nan");
  CHECK(csv_number(1.0 / 0.0) == "inf");

  BenchTable t;
  BenchRow r;
  r.level = 3;
  r.dofs = 10;
  r.exponent = std::nan("");
  r.converged = true;
  t.rows.push_back(r);
  std::ostringstream os;
  write_bench_csv(os, t);
  const std::string csv = os.str();
  CHECK(csv.rfind(bench_csv_header() + "\n", 0) == 0);
  CHECK(csv.find("quadrant,q1,3,") != std::string::npos);
  const Json j = bench_json(t);
  CHECK(j["rows"].size() == 1u);
  CHECK(j["rows"][0]["exponent"].is_null());

  SpectrumReport s;
  s.method = "bpwx";
  s.element = "q2";
  s.level = 5;
  s.nu = 2;
  s.rho = 0.25;
  std::ostringstream ss;
  write_spectrum_csv(ss, {s});
  CHECK(ss.str().find("bpwx,5,q2,2,0.25,") != std::string::npos);
  CHECK(spectrum_json({s})[0]["rho"] == 0.25);

  const Json cj = config_json(RunConfig{});
  CHECK(cj["strategy"] == "quadrant");
  CHECK(cj["ordering"] == "natural");
}
