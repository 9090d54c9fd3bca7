#include "hmg/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace hmg {

namespace {

[[noreturn]] void malformed(int line, const std::string& msg) {
  throw MeshError(MeshErrorKind::Malformed, "mesh file line " + std::to_string(line) + ": " + msg);
}

// Reads the next non-empty line (comments stripped) into tokens.
bool next_tokens(std::istream& in, int& line_no, std::vector<std::string>& tokens) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ss(line);
    tokens.clear();
    std::string t;
    while (ss >> t) tokens.push_back(t);
    if (!tokens.empty()) return true;
  }
  return false;
}

long parse_int(const std::string& s, int line) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    malformed(line, "expected an integer, got '" + s + "'");
  }
  if (used != s.size()) malformed(line, "expected an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    malformed(line, "expected a real number, got '" + s + "'");
  }
  if (used != s.size()) malformed(line, "expected a real number, got '" + s + "'");
  return v;
}

int vtk_cell_type(Shape s) {
  switch (s) {
    case Shape::Quad: return 9;
    case Shape::Tri: return 5;
    case Shape::Hex: return 12;
  }
  return 0;
}

}  // namespace

CoarseMesh read_mesh(std::istream& in) {
  CoarseMesh m;
  int line = 0;
  std::vector<std::string> tok;

  if (!next_tokens(in, line, tok) || tok.size() != 2 || tok[0] != "dim") malformed(line, "expected 'dim <d>'");
  m.dim = static_cast<int>(parse_int(tok[1], line));
  if (m.dim != 2 && m.dim != 3) malformed(line, "dimension must be 2 or 3");

  if (!next_tokens(in, line, tok) || tok.size() != 2 || tok[0] != "nodes") malformed(line, "expected 'nodes <N>'");
  const long nn = parse_int(tok[1], line);
  if (nn <= 0) malformed(line, "node count must be positive");
  m.vertices.reserve(nn);
  for (long i = 0; i < nn; ++i) {
    if (!next_tokens(in, line, tok)) malformed(line, "unexpected end of file in node block");
    if (static_cast<int>(tok.size()) != m.dim) malformed(line, "expected " + std::to_string(m.dim) + " coordinates");
    Point p{0, 0, 0};
    for (int d = 0; d < m.dim; ++d) p[d] = parse_real(tok[d], line);
    m.vertices.push_back(p);
  }

  if (!next_tokens(in, line, tok) || tok.size() != 4 || tok[0] != "elements")
    malformed(line, "expected 'elements <E> <shape> <degree>'");
  const long ne = parse_int(tok[1], line);
  if (ne <= 0) malformed(line, "element count must be positive");
  Shape shape;
  try {
    shape = parse_shape(tok[2]);
  } catch (const std::invalid_argument& e) {
    malformed(line, e.what());
  }
  const long degree = parse_int(tok[3], line);
  if (degree != 1 && degree != 2) malformed(line, "degree must be 1 or 2");
  if (shape_dim(shape) != m.dim) malformed(line, "shape does not match dimension");
  m.family = {shape, static_cast<int>(degree)};
  const int nv = shape_vertex_count(shape);
  for (long e = 0; e < ne; ++e) {
    if (!next_tokens(in, line, tok)) malformed(line, "unexpected end of file in element block");
    if (static_cast<int>(tok.size()) != nv)
      throw MeshError(MeshErrorKind::Connectivity, "mesh file line " + std::to_string(line) + ": expected " +
                                                       std::to_string(nv) + " vertex indices");
    std::vector<int> cell;
    for (const auto& t : tok) cell.push_back(static_cast<int>(parse_int(t, line)));
    m.cells.push_back(std::move(cell));
  }
  if (next_tokens(in, line, tok)) malformed(line, "trailing content after element block");
  return m;
}

CoarseMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const CoarseMesh& m) {
  out << std::setprecision(17);
  out << "dim " << m.dim << "\nnodes " << m.vertices.size() << '\n';
  for (const auto& p : m.vertices) {
    for (int d = 0; d < m.dim; ++d) out << (d ? " " : "") << p[d];
    out << '\n';
  }
  out << "elements " << m.cells.size() << ' ' << shape_name(m.family.shape) << ' ' << m.family.degree << '\n';
  for (const auto& c : m.cells) {
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << c[i];
    out << '\n';
  }
}

void write_vtk(std::ostream& out, const MeshLevel& lvl, const VtkFields& fields, const std::string& title) {
  const int nv = shape_vertex_count(lvl.family.shape);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(17);
  out << "POINTS " << lvl.num_nodes() << " double\n";
  for (const auto& p : lvl.coords) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  out << "CELLS " << lvl.num_elements() << ' ' << lvl.num_elements() * (nv + 1) << '\n';
  for (int e = 0; e < lvl.num_elements(); ++e) {
    out << nv;
    const auto nodes = lvl.nodes_of(e);
    for (int v = 0; v < nv; ++v) out << ' ' << nodes[v];
    out << '\n';
  }
  out << "CELL_TYPES " << lvl.num_elements() << '\n';
  for (int e = 0; e < lvl.num_elements(); ++e) out << vtk_cell_type(lvl.family.shape) << '\n';
  if (!fields.cell_scalars.empty()) {
    out << "CELL_DATA " << lvl.num_elements() << '\n';
    for (const auto& [name, vals] : fields.cell_scalars) {
      if (static_cast<int>(vals.size()) != lvl.num_elements())
        throw std::invalid_argument("write_vtk: cell field '" + name + "' has wrong size");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : vals) out << v << '\n';
    }
  }
  if (!fields.point_scalars.empty()) {
    out << "POINT_DATA " << lvl.num_nodes() << '\n';
    for (const auto& [name, vals] : fields.point_scalars) {
      if (static_cast<int>(vals.size()) != lvl.num_nodes())
        throw std::invalid_argument("write_vtk: point field '" + name + "' has wrong size");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : vals) out << v << '\n';
    }
  }
}

VtkFields level_fields(const MeshLevel& lvl) {
  VtkFields f;
  auto& tag = f.point_scalars["tag"];
  auto& dir = f.point_scalars["dirichlet"];
  for (int n = 0; n < lvl.num_nodes(); ++n) {
    tag.push_back(static_cast<double>(lvl.tags[n]));
    dir.push_back(lvl.dirichlet[n]);
  }
  auto& depth = f.cell_scalars["depth"];
  auto& created = f.cell_scalars["level"];
  for (const auto& el : lvl.elements) {
    depth.push_back(el.depth);
    created.push_back(el.created_level);
  }
  return f;
}

}  // namespace hmg
