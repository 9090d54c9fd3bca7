#include "hmg/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace hmg {

namespace {
constexpr double kDropTol = 1e-14;
}

FamilyTree FamilyTree::build(const MeshLevel& lvl) {
  const ReferenceElement ref(lvl.family);
  const int nn = lvl.num_nodes();
  const int npe = lvl.nodes_per_element;
  std::vector<std::pair<int, FamilyEdge>> all;
  std::vector<double> vals(npe);
  FamilyTree t;
  t.parent_count_.assign(nn, 0);
  for (int c = 0; c < nn; ++c) {
    if (!lvl.is_hanging(c)) continue;
    std::vector<int> parents;
    for (int hi = lvl.host_offsets[c]; hi < lvl.host_offsets[c + 1]; ++hi) {
      const HangingHost& h = lvl.hosts[hi];
      ref.values(h.xi, vals.data());
      const auto nodes = lvl.nodes_of(h.element);
      for (int j = 0; j < npe; ++j) {
        if (std::abs(vals[j]) <= kDropTol) continue;
        all.push_back({nodes[j], FamilyEdge{c, vals[j], hi, hi == lvl.designated[c]}});
        parents.push_back(nodes[j]);
      }
    }
    std::sort(parents.begin(), parents.end());
    t.parent_count_[c] = static_cast<int>(std::unique(parents.begin(), parents.end()) - parents.begin());
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.child != b.second.child) return a.second.child < b.second.child;
    return a.second.host < b.second.host;
  });
  t.offsets_.assign(nn + 1, 0);
  t.edges_.reserve(all.size());
  for (const auto& [p, e] : all) {
    ++t.offsets_[p + 1];
    t.edges_.push_back(e);
  }
  std::partial_sum(t.offsets_.begin(), t.offsets_.end(), t.offsets_.begin());
  t.max_generations_ = std::max(1, lvl.max_depth);
  return t;
}

std::vector<std::pair<int, double>> direct_children(const FamilyTree& tree, int node) {
  std::vector<std::pair<int, double>> out;
  for (const FamilyEdge& e : tree.children(node)) out.emplace_back(e.child, e.weight);
  return out;
}

namespace {

// Edges from p admissible under the given rule, as (child, weight).
std::vector<std::pair<int, double>> admissible(const FamilyTree& tree, int p, PruningRule rule) {
  std::vector<std::pair<int, double>> out;
  int last_child = -1;
  for (const FamilyEdge& e : tree.children(p)) {
    if (rule == PruningRule::DesignatedHost) {
      if (e.designated) out.emplace_back(e.child, e.weight);
    } else if (e.child != last_child) {
      // edges for one child are ordered by host, coarsest first
      out.emplace_back(e.child, e.weight);
      last_child = e.child;
    }
  }
  return out;
}

bool is_direct_child(const FamilyTree& tree, int p, int c) {
  for (const FamilyEdge& e : tree.children(p))
    if (e.child == c) return true;
  return false;
}

void dfs(const FamilyTree& tree, PruningRule rule, std::vector<int>& path, double coeff, SparseRow& row) {
  for (const auto& [c, w] : admissible(tree, path.back(), rule)) {
    if (std::find(path.begin(), path.end(), c) != path.end())
      throw std::runtime_error("malformed family tree: cycle through node " + std::to_string(c));
    if (rule == PruningRule::AncestorChild && path.size() >= 2) {
      bool pruned = false;
      for (std::size_t m = 0; m + 1 < path.size() && !pruned; ++m) pruned = is_direct_child(tree, path[m], c);
      if (pruned) continue;
    }
    if (static_cast<int>(path.size()) > tree.max_generations())
      throw std::runtime_error("malformed family tree: path deeper than the refinement depth");
    const double cc = coeff * w;
    row[c] += cc;
    path.push_back(c);
    dfs(tree, rule, path, cc, row);
    path.pop_back();
  }
}

}  // namespace

SparseRow build_constraint_row(const MeshLevel& lvl, const FamilyTree& tree, int master, PruningRule rule) {
  if (master < 0 || master >= lvl.num_nodes()) throw std::out_of_range("build_constraint_row: node out of range");
  SparseRow row;
  if (lvl.is_hanging(master)) return row;
  std::vector<int> path{master};
  dfs(tree, rule, path, 1.0, row);
  for (auto it = row.begin(); it != row.end();) it = (std::abs(it->second) < kDropTol) ? row.erase(it) : std::next(it);
  return row;
}

CsrMatrix assemble_Rhat(const MeshLevel& lvl) {
  const ReferenceElement ref(lvl.family);
  const int nn = lvl.num_nodes();
  const int npe = lvl.nodes_per_element;
  std::vector<int> order;
  for (int n = 0; n < nn; ++n)
    if (lvl.is_hanging(n)) order.push_back(n);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return lvl.designated_host(a)->depth < lvl.designated_host(b)->depth;
  });

  std::vector<std::vector<std::pair<int, double>>> col(nn);
  std::vector<char> done(nn, 0);
  std::vector<double> vals(npe);
  std::map<int, double> acc;
  for (int c : order) {
    const HangingHost& h = *lvl.designated_host(c);
    ref.values(h.xi, vals.data());
    const auto nodes = lvl.nodes_of(h.element);
    acc.clear();
    for (int j = 0; j < npe; ++j) {
      if (std::abs(vals[j]) <= kDropTol) continue;
      const int p = nodes[j];
      if (!lvl.is_hanging(p)) {
        acc[p] += vals[j];
      } else {
        if (!done[p]) throw std::runtime_error("assemble_Rhat: host ordering violated at node " + std::to_string(p));
        for (const auto& [m, v] : col[p]) acc[m] += vals[j] * v;
      }
    }
    col[c].assign(acc.begin(), acc.end());
    done[c] = 1;
  }

  std::vector<Triplet> trip;
  trip.reserve(nn);
  for (int n = 0; n < nn; ++n) {
    if (!lvl.is_hanging(n)) {
      trip.emplace_back(n, n, 1.0);
      continue;
    }
    for (const auto& [m, v] : col[n])
      if (std::abs(v) >= kDropTol) trip.emplace_back(m, n, v);
  }
  return csr_from_triplets(nn, nn, trip);
}

CsrMatrix assemble_Rhat_paths(const MeshLevel& lvl, const FamilyTree& tree, PruningRule rule) {
  const int nn = lvl.num_nodes();
  std::vector<Triplet> trip;
  for (int n = 0; n < nn; ++n) {
    if (lvl.is_hanging(n)) continue;
    trip.emplace_back(n, n, 1.0);
    if (tree.children(n).empty()) continue;
    for (const auto& [c, v] : build_constraint_row(lvl, tree, n, rule)) trip.emplace_back(n, c, v);
  }
  return csr_from_triplets(nn, nn, trip);
}

double verify_continuity(const MeshLevel& lvl, const CsrMatrix& rhat, int samples) {
  if (samples < 2) throw std::invalid_argument("verify_continuity: need at least two samples per direction");
  const int nn = lvl.num_nodes();
  if (rhat.rows() != nn || rhat.cols() != nn) throw std::invalid_argument("verify_continuity: R̂ size mismatch");
  const ReferenceElement ref(lvl.family);
  const GeometryMap geo(lvl.family.shape);
  const int npe = lvl.nodes_per_element;
  const CsrMatrix rt = transpose(rhat);

  std::vector<double> acc(nn, 0.0);
  std::vector<int> touched;
  std::vector<double> ve(npe), vt(npe);
  std::unordered_set<std::uint64_t> seen;
  double max_jump = 0.0;

  for (int h = 0; h < nn; ++h) {
    if (!lvl.is_hanging(h)) continue;
    for (const HangingHost& host : lvl.hosts_of(h)) {
      const int T = host.element;
      Point vT[8];
      lvl.element_vertices(T, vT);
      const auto nodesT = lvl.nodes_of(T);
      for (int E : lvl.elements_of(h)) {
        const int li = lvl.local_index(E, h);
        const Point xh = ref.nodes()[li];
        Point vE[8];
        lvl.element_vertices(E, vE);
        const auto nodesE = lvl.nodes_of(E);
        const auto& ents = ref.boundary_entities();
        for (std::size_t ei = 0; ei < ents.size(); ++ei) {
          const Entity& en = ents[ei];
          if (!ref.on_entity(en, xh, 1e-12)) continue;
          const std::uint64_t key = (static_cast<std::uint64_t>(E) * 32 + ei) * 0x100000000ULL + T;
          if (!seen.insert(key).second) continue;

          std::vector<Point> xiE, xiT;
          const int ns = samples;
          const int nt = en.dim == 2 ? samples : 1;
          bool inside = true;
          for (int a = 0; a < ns && inside; ++a)
            for (int b = 0; b < nt && inside; ++b) {
              const double s = static_cast<double>(a) / (ns - 1);
              const double t = en.dim == 2 ? static_cast<double>(b) / (nt - 1) : 0.0;
              Point xi;
              for (int k = 0; k < 3; ++k) xi[k] = en.origin[k] + s * en.u[k] + t * en.v[k];
              Point xt;
              if (!geo.inverse(vT, geo.map(vE, xi), xt)) {
                inside = false;
                break;
              }
              bool on_boundary = false;
              for (const Entity& f : ref.facets())
                if (ref.on_entity(f, xt, 1e-9)) {
                  on_boundary = true;
                  break;
                }
              if (!on_boundary || !ref.contains(xt, 1e-9)) inside = false;
              xiE.push_back(xi);
              xiT.push_back(xt);
            }
          if (!inside) continue;
          // All samples must lie on a single facet of T.
          bool single = false;
          for (const Entity& f : ref.facets()) {
            bool all = true;
            for (const auto& xt : xiT)
              if (!ref.on_entity(f, xt, 1e-9)) {
                all = false;
                break;
              }
            if (all) {
              single = true;
              break;
            }
          }
          if (!single) continue;

          for (std::size_t sidx = 0; sidx < xiE.size(); ++sidx) {
            ref.values(xiE[sidx], ve.data());
            Point xt = xiT[sidx];
            for (int k = 0; k < 3; ++k) xt[k] = std::clamp(xt[k], -1.0, 1.0);
            ref.values(xt, vt.data());
            for (int j = 0; j < npe; ++j) {
              for (CsrMatrix::InnerIterator it(rt, nodesE[j]); it; ++it) {
                const int i = static_cast<int>(it.col());
                if (acc[i] == 0.0) touched.push_back(i);
                acc[i] += it.value() * ve[j];
              }
              for (CsrMatrix::InnerIterator it(rt, nodesT[j]); it; ++it) {
                const int i = static_cast<int>(it.col());
                if (acc[i] == 0.0) touched.push_back(i);
                acc[i] -= it.value() * vt[j];
              }
            }
            for (int i : touched) {
              max_jump = std::max(max_jump, std::abs(acc[i]));
              acc[i] = 0.0;
            }
            touched.clear();
          }
        }
      }
    }
  }
  return max_jump;
}

std::string constraint_listing(const MeshLevel& lvl, const CsrMatrix& rhat) {
  std::ostringstream os;
  os << std::setprecision(15);
  for (int m = 0; m < rhat.outerSize(); ++m) {
    if (lvl.is_hanging(m)) continue;
    bool first = true;
    for (CsrMatrix::InnerIterator it(rhat, m); it; ++it) {
      if (it.col() == m) continue;
      os << (first ? std::to_string(m) + " -> {" : ", ") << it.col() << ": " << it.value();
      first = false;
    }
    if (!first) os << "}\n";
  }
  return os.str();
}

}  // namespace hmg
