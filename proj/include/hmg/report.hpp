#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hmg/bench.hpp"
#include "hmg/config.hpp"
#include "hmg/krylov.hpp"
#include "hmg/mesh.hpp"
#include "hmg/spectrum.hpp"

namespace hmg {

using Json = nlohmann::ordered_json;

// Fixed-format number formatting for CSV: classic locale, '.' decimal.
std::string csv_number(double v);

Json config_json(const RunConfig& c);
Json solve_json(const SolveReport& r, const RunConfig& c, int level);
std::string solve_csv_header();
std::string solve_csv_row(const SolveReport& r, const RunConfig& c, int level);

Json mesh_summary_json(const HierarchicalMesh& mesh);

std::string bench_csv_header();
void write_bench_csv(std::ostream& out, const BenchTable& t);
Json bench_json(const BenchTable& t);

std::string spectrum_csv_header();
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumReport>& rows);
Json spectrum_json(const std::vector<SpectrumReport>& rows);

}  // namespace hmg
