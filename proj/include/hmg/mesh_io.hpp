#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hmg/mesh.hpp"

namespace hmg {

// Text format:
//   dim <d>
//   nodes <N>
//   <N lines of d reals>
//   elements <E> <quad|tri|hex> <degree>
//   <E lines of 0-based vertex indices in VTK order>
// Blank lines and text after '#' are ignored. Higher-order nodes are generated.
CoarseMesh read_mesh(std::istream& in);
CoarseMesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const CoarseMesh& mesh);

struct VtkFields {
  std::map<std::string, std::vector<double>> point_scalars;
  std::map<std::string, std::vector<double>> cell_scalars;
};

// Legacy ASCII unstructured grid; cells use the element vertices.
void write_vtk(std::ostream& out, const MeshLevel& level, const VtkFields& fields, const std::string& title = "hmg");

// Standard per-level fields: node tag, Dirichlet flag, element depth and creation level.
VtkFields level_fields(const MeshLevel& level);

}  // namespace hmg
