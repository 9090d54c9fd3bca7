#include "hmg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace hmg {

// ---------------------------------------------------------------------------
// NodeLocator

NodeLocator::NodeLocator(double quantum) : q_(quantum) {
  if (!(quantum > 0.0)) throw std::invalid_argument("NodeLocator: quantum must be positive");
}

std::size_t NodeLocator::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto v : k) {
    std::uint64_t x = static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    h ^= x;
  }
  return static_cast<std::size_t>(h);
}

int NodeLocator::find(const Point& x) const {
  Key base;
  std::array<int, 3> alt{};
  for (int d = 0; d < 3; ++d) {
    const double s = x[d] / q_;
    base[d] = std::llround(s);
    const double frac = s - static_cast<double>(base[d]);
    alt[d] = frac > 0.25 ? 1 : (frac < -0.25 ? -1 : 0);
  }
  auto it = map_.find(base);
  if (it != map_.end()) return it->second;
  for (int mask = 1; mask < 8; ++mask) {
    Key k = base;
    bool valid = true;
    for (int d = 0; d < 3; ++d) {
      if (mask & (1 << d)) {
        if (alt[d] == 0) {
          valid = false;
          break;
        }
        k[d] += alt[d];
      }
    }
    if (!valid) continue;
    it = map_.find(k);
    if (it != map_.end()) return it->second;
  }
  return -1;
}

int NodeLocator::insert(const Point& x, int id) {
  const int found = find(x);
  if (found >= 0) return found;
  Key k;
  for (int d = 0; d < 3; ++d) k[d] = std::llround(x[d] / q_);
  map_.emplace(k, id);
  return id;
}

// ---------------------------------------------------------------------------
// Builders

CoarseMesh rectangle_mesh(FeFamily family, int nx, int ny, double x0, double x1, double y0, double y1) {
  if (family.shape == Shape::Hex) throw std::invalid_argument("rectangle_mesh: 2D family required");
  if (nx < 1 || ny < 1) throw std::invalid_argument("rectangle_mesh: nx, ny must be positive");
  CoarseMesh m;
  m.dim = 2;
  m.family = family;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny, 0.0});
  auto v = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (family.shape == Shape::Quad) {
        m.cells.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)});
      } else {
        m.cells.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
        m.cells.push_back({v(i, j), v(i + 1, j + 1), v(i, j + 1)});
      }
    }
  return m;
}

CoarseMesh box_mesh(FeFamily family, int nx, int ny, int nz, const Point& lo, const Point& hi) {
  if (family.shape != Shape::Hex) throw std::invalid_argument("box_mesh: hexahedral family required");
  if (nx < 1 || ny < 1 || nz < 1) throw std::invalid_argument("box_mesh: counts must be positive");
  CoarseMesh m;
  m.dim = 3;
  m.family = family;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        m.vertices.push_back({lo[0] + (hi[0] - lo[0]) * i / nx, lo[1] + (hi[1] - lo[1]) * j / ny,
                              lo[2] + (hi[2] - lo[2]) * k / nz});
  auto v = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        m.cells.push_back({v(i, j, k), v(i + 1, j, k), v(i + 1, j + 1, k), v(i, j + 1, k), v(i, j, k + 1),
                           v(i + 1, j, k + 1), v(i + 1, j + 1, k + 1), v(i, j + 1, k + 1)});
  return m;
}

// ---------------------------------------------------------------------------
// MeshLevel helpers

void MeshLevel::element_vertices(int e, Point* out) const {
  const auto nodes = nodes_of(e);
  const int nv = shape_vertex_count(family.shape);
  for (int v = 0; v < nv; ++v) out[v] = coords[nodes[v]];
}

Point MeshLevel::centroid(int e) const {
  Point verts[8];
  element_vertices(e, verts);
  const int nv = shape_vertex_count(family.shape);
  Point c{0, 0, 0};
  for (int v = 0; v < nv; ++v)
    for (int d = 0; d < 3; ++d) c[d] += verts[v][d] / nv;
  return c;
}

double MeshLevel::volume(int e) const {
  const GeometryMap geo(family.shape);
  const QuadratureRule q = default_quadrature({family.shape, 1});
  Point verts[8];
  element_vertices(e, verts);
  double vol = 0.0;
  std::array<double, 9> jac;
  for (std::size_t i = 0; i < q.points.size(); ++i) vol += q.weights[i] * geo.jacobian(verts, q.points[i], jac);
  return vol;
}

double MeshLevel::total_volume() const {
  double v = 0.0;
  for (int e = 0; e < num_elements(); ++e) v += volume(e);
  return v;
}

std::vector<std::uint8_t> MeshLevel::constrained_mask() const {
  std::vector<std::uint8_t> m(num_nodes(), 0);
  for (int n = 0; n < num_nodes(); ++n) m[n] = (tags[n] == NodeTag::Hanging || dirichlet[n]) ? 1 : 0;
  return m;
}

int MeshLevel::count(NodeTag t) const { return static_cast<int>(std::count(tags.begin(), tags.end(), t)); }

int MeshLevel::count_dirichlet() const {
  return static_cast<int>(std::count(dirichlet.begin(), dirichlet.end(), std::uint8_t{1}));
}

int MeshLevel::local_index(int e, int n) const {
  const auto nodes = nodes_of(e);
  for (int i = 0; i < nodes_per_element; ++i)
    if (nodes[i] == n) return i;
  return -1;
}

// ---------------------------------------------------------------------------
// HierarchicalMesh

namespace {

double bbox_diagonal(const std::vector<Point>& pts) {
  if (pts.empty()) return 1.0;
  Point lo = pts[0], hi = pts[0];
  for (const auto& p : pts)
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  double s = 0.0;
  for (int d = 0; d < 3; ++d) s += (hi[d] - lo[d]) * (hi[d] - lo[d]);
  return s > 0.0 ? std::sqrt(s) : 1.0;
}

// For each child c and child facet f, the parent facet containing it or -1.
std::vector<std::vector<int>> child_facet_table(const ReferenceElement& ref) {
  std::vector<std::vector<int>> table(ref.num_children());
  for (int c = 0; c < ref.num_children(); ++c) {
    for (const Entity& cf : ref.facets()) {
      int owner = -1;
      for (std::size_t g = 0; g < ref.facets().size() && owner < 0; ++g) {
        bool all = true;
        for (int v : cf.vertices)
          if (!ref.on_entity(ref.facets()[g], ref.to_parent(c, ref.nodes()[v]), 1e-12)) {
            all = false;
            break;
          }
        if (all) owner = static_cast<int>(g);
      }
      table[c].push_back(owner);
    }
  }
  return table;
}

}  // namespace

HierarchicalMesh::HierarchicalMesh(const CoarseMesh& coarse)
    : family_(coarse.family), ref_(coarse.family), geo_(coarse.family.shape), locator_(1.0) {
  const int dim = shape_dim(family_.shape);
  if (coarse.dim != dim)
    throw MeshError(MeshErrorKind::Malformed, "mesh dimension does not match element shape");
  if (coarse.cells.empty()) throw MeshError(MeshErrorKind::Malformed, "mesh has no elements");
  const int nv = shape_vertex_count(family_.shape);
  const int nverts = static_cast<int>(coarse.vertices.size());

  std::vector<char> used(nverts, 0);
  for (std::size_t e = 0; e < coarse.cells.size(); ++e) {
    const auto& c = coarse.cells[e];
    if (static_cast<int>(c.size()) != nv)
      throw MeshError(MeshErrorKind::Connectivity,
                      "element " + std::to_string(e) + " has " + std::to_string(c.size()) + " vertices, expected " +
                          std::to_string(nv));
    for (int v : c) {
      if (v < 0 || v >= nverts)
        throw MeshError(MeshErrorKind::Connectivity,
                        "element " + std::to_string(e) + " references node " + std::to_string(v) + " out of range");
      used[v] = 1;
    }
    std::vector<int> s = c;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw MeshError(MeshErrorKind::Connectivity, "element " + std::to_string(e) + " repeats a node");
  }
  for (int v = 0; v < nverts; ++v)
    if (!used[v]) throw MeshError(MeshErrorKind::Connectivity, "node " + std::to_string(v) + " is not used");

  locator_ = NodeLocator(1e-12 * bbox_diagonal(coarse.vertices));
  for (int v = 0; v < nverts; ++v) {
    if (register_node(coarse.vertices[v]) != v)
      throw MeshError(MeshErrorKind::Connectivity, "node " + std::to_string(v) + " duplicates another node");
  }

  // Geometry check at reference vertices and centre.
  for (std::size_t e = 0; e < coarse.cells.size(); ++e) {
    Point verts[8];
    double h = 0.0;
    for (int v = 0; v < nv; ++v) verts[v] = coarse.vertices[coarse.cells[e][v]];
    for (int v = 1; v < nv; ++v)
      for (int d = 0; d < 3; ++d) h = std::max(h, std::abs(verts[v][d] - verts[0][d]));
    std::vector<Point> probes(ref_.nodes().begin(), ref_.nodes().begin() + nv);
    probes.push_back(family_.shape == Shape::Tri ? Point{1.0 / 3, 1.0 / 3, 0} : Point{0, 0, 0});
    for (const auto& xi : probes) {
      std::array<double, 9> jac;
      const double det = geo_.jacobian(verts, xi, jac);
      if (!(det > 1e-12 * std::pow(h, dim)))
        throw MeshError(MeshErrorKind::Degenerate, "element " + std::to_string(e) + " is degenerate or inverted");
    }
  }

  // Domain boundary from facets seen once.
  std::map<std::vector<int>, int> facet_count;
  for (const auto& c : coarse.cells)
    for (const Entity& f : ref_.facets()) {
      std::vector<int> key;
      for (int v : f.vertices) key.push_back(c[v]);
      std::sort(key.begin(), key.end());
      if (++facet_count[key] > 2)
        throw MeshError(MeshErrorKind::Connectivity, "a facet is shared by more than two elements");
    }

  MeshLevel lvl;
  lvl.family = family_;
  lvl.index = 0;
  lvl.nodes_per_element = ref_.num_nodes();
  for (std::size_t e = 0; e < coarse.cells.size(); ++e) {
    const auto& c = coarse.cells[e];
    Cell cell;
    for (std::size_t f = 0; f < ref_.facets().size(); ++f) {
      std::vector<int> key;
      for (int v : ref_.facets()[f].vertices) key.push_back(c[v]);
      std::sort(key.begin(), key.end());
      if (facet_count[key] == 1) cell.boundary_mask |= static_cast<std::uint8_t>(1u << f);
    }
    cells_.push_back(cell);
    lvl.elements.push_back({static_cast<int>(e), -1, -1, 0, 0});
    Point verts[8];
    for (int v = 0; v < nv; ++v) verts[v] = coarse.vertices[c[v]];
    for (int i = 0; i < ref_.num_nodes(); ++i) {
      if (i < nv) lvl.element_nodes.push_back(c[i]);
      else lvl.element_nodes.push_back(register_node(geo_.map(verts, ref_.nodes()[i])));
    }
  }
  lvl.coords = coords_;
  finalize_level(lvl);
  levels_.push_back(std::move(lvl));
}

int HierarchicalMesh::register_node(const Point& x) {
  const int id = locator_.insert(x, static_cast<int>(coords_.size()));
  if (id == static_cast<int>(coords_.size())) coords_.push_back(x);
  return id;
}

const MeshLevel& HierarchicalMesh::refine(const std::vector<int>& marked) {
  const MeshLevel& cur = levels_.back();
  std::vector<char> flag(cur.num_elements(), 0);
  for (int e : marked) {
    if (e < 0 || e >= cur.num_elements())
      throw MeshError(MeshErrorKind::Usage, "marked element " + std::to_string(e) + " out of range");
    flag[e] = 1;
  }
  const auto table = child_facet_table(ref_);

  MeshLevel next;
  next.family = family_;
  next.index = cur.index + 1;
  next.nodes_per_element = cur.nodes_per_element;
  const int nv = ref_.num_vertices();
  const int npe = cur.nodes_per_element;
  next.elements.reserve(cur.elements.size());
  next.element_nodes.reserve(cur.element_nodes.size());

  for (int e = 0; e < cur.num_elements(); ++e) {
    const LevelElement& el = cur.elements[e];
    const auto nodes = cur.nodes_of(e);
    if (!flag[e]) {
      next.elements.push_back({el.cell, e, -1, el.depth, el.created_level});
      next.element_nodes.insert(next.element_nodes.end(), nodes.begin(), nodes.end());
      continue;
    }
    Point verts[8];
    for (int v = 0; v < nv; ++v) verts[v] = cur.coords[nodes[v]];
    const int first = static_cast<int>(cells_.size());
    cells_[el.cell].first_child = first;
    const std::uint8_t pmask = cells_[el.cell].boundary_mask;
    for (int c = 0; c < ref_.num_children(); ++c) {
      Cell child;
      child.parent = el.cell;
      child.depth = el.depth + 1;
      child.created_level = next.index;
      for (std::size_t f = 0; f < table[c].size(); ++f) {
        const int g = table[c][f];
        if (g >= 0 && (pmask & (1u << g))) child.boundary_mask |= static_cast<std::uint8_t>(1u << f);
      }
      cells_.push_back(child);
      next.elements.push_back({first + c, e, c, el.depth + 1, next.index});
      for (int i = 0; i < npe; ++i)
        next.element_nodes.push_back(register_node(geo_.map(verts, ref_.to_parent(c, ref_.nodes()[i]))));
    }
  }
  next.coords = coords_;
  finalize_level(next);
  markers_.emplace_back(marked.begin(), marked.end());
  std::sort(markers_.back().begin(), markers_.back().end());
  levels_.push_back(std::move(next));
  return levels_.back();
}

void HierarchicalMesh::finalize_level(MeshLevel& lvl) const {
  const int nn = lvl.num_nodes();
  const int ne = lvl.num_elements();
  const int npe = lvl.nodes_per_element;

  lvl.max_depth = 0;
  for (const auto& el : lvl.elements) lvl.max_depth = std::max(lvl.max_depth, el.depth);

  // node -> element incidence
  lvl.incidence_offsets.assign(nn + 1, 0);
  for (int n : lvl.element_nodes) ++lvl.incidence_offsets[n + 1];
  for (int n = 0; n < nn; ++n) {
    if (lvl.incidence_offsets[n + 1] == 0)
      throw MeshError(MeshErrorKind::Connectivity, "node without incident element");
    lvl.incidence_offsets[n + 1] += lvl.incidence_offsets[n];
  }
  lvl.incidence.assign(lvl.element_nodes.size(), -1);
  {
    std::vector<int> pos(lvl.incidence_offsets.begin(), lvl.incidence_offsets.end() - 1);
    for (int e = 0; e < ne; ++e)
      for (int n : lvl.nodes_of(e)) lvl.incidence[pos[n]++] = e;
  }

  detect_hanging(lvl);

  // Boundary flags from inherited facet masks.
  std::vector<std::vector<int>> on_facet(ref_.facets().size());
  for (std::size_t f = 0; f < ref_.facets().size(); ++f)
    for (int i = 0; i < npe; ++i)
      if (ref_.on_entity(ref_.facets()[f], ref_.nodes()[i], 1e-12)) on_facet[f].push_back(i);
  lvl.boundary.assign(nn, 0);
  for (int e = 0; e < ne; ++e) {
    const std::uint8_t mask = cells_[lvl.elements[e].cell].boundary_mask;
    if (!mask) continue;
    const auto nodes = lvl.nodes_of(e);
    for (std::size_t f = 0; f < on_facet.size(); ++f)
      if (mask & (1u << f))
        for (int i : on_facet[f]) lvl.boundary[nodes[i]] = 1;
  }
  lvl.dirichlet.assign(nn, 0);
  for (int n = 0; n < nn; ++n) lvl.dirichlet[n] = (lvl.boundary[n] && lvl.tags[n] != NodeTag::Hanging) ? 1 : 0;

  // Masters: non-hanging nodes of a designated host whose basis is nonzero at the hanging node.
  std::vector<double> vals(npe);
  for (int n = 0; n < nn; ++n) {
    const HangingHost* h = lvl.designated_host(n);
    if (!h) continue;
    ref_.values(h->xi, vals.data());
    const auto nodes = lvl.nodes_of(h->element);
    for (int i = 0; i < npe; ++i)
      if (std::abs(vals[i]) > 1e-14 && lvl.tags[nodes[i]] != NodeTag::Hanging) lvl.tags[nodes[i]] = NodeTag::Master;
  }
}

void HierarchicalMesh::detect_hanging(MeshLevel& lvl) const {
  const int nn = lvl.num_nodes();
  const int alpha = family_.degree;
  const int nv = ref_.num_vertices();
  std::vector<std::pair<int, HangingHost>> found;

  for (int e = 0; e < lvl.num_elements(); ++e) {
    const int d = lvl.elements[e].depth;
    const long long m = static_cast<long long>(alpha) << (lvl.max_depth - d);
    if (m <= alpha) continue;
    Point verts[8];
    const auto nodes = lvl.nodes_of(e);
    for (int v = 0; v < nv; ++v) verts[v] = lvl.coords[nodes[v]];
    const auto& ents = ref_.boundary_entities();
    for (std::size_t ei = 0; ei < ents.size(); ++ei) {
      const Entity& en = ents[ei];
      auto probe = [&](double s, double t) {
        Point xi;
        for (int k = 0; k < 3; ++k) xi[k] = en.origin[k] + s * en.u[k] + t * en.v[k];
        const int id = locator_.find(geo_.map(verts, xi));
        if (id < 0 || id >= nn) return;
        if (std::find(nodes.begin(), nodes.end(), id) != nodes.end()) return;
        found.push_back({id, HangingHost{e, static_cast<int>(ei), d, xi}});
      };
      if (en.dim == 1) {
        for (long long a = 1; a < m; ++a) probe(static_cast<double>(a) / m, 0.0);
      } else {
        for (long long a = 1; a < m; ++a)
          for (long long b = 1; b < m; ++b) probe(static_cast<double>(a) / m, static_cast<double>(b) / m);
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    if (x.second.depth != y.second.depth) return x.second.depth < y.second.depth;
    if (x.second.element != y.second.element) return x.second.element < y.second.element;
    return x.second.entity < y.second.entity;
  });

  lvl.host_offsets.assign(nn + 1, 0);
  lvl.hosts.clear();
  lvl.hosts.reserve(found.size());
  lvl.designated.assign(nn, -1);
  lvl.tags.assign(nn, NodeTag::Interior);
  for (const auto& [n, h] : found) {
    ++lvl.host_offsets[n + 1];
    lvl.hosts.push_back(h);
  }
  for (int n = 0; n < nn; ++n) {
    lvl.host_offsets[n + 1] += lvl.host_offsets[n];
    if (lvl.host_offsets[n + 1] > lvl.host_offsets[n]) {
      lvl.designated[n] = lvl.host_offsets[n];
      lvl.tags[n] = NodeTag::Hanging;
    }
  }
}

}  // namespace hmg
