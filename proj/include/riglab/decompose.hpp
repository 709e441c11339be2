#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "riglab/core.hpp"
#include "riglab/inversions.hpp"
#include "riglab/orientation.hpp"

namespace riglab {

/// One connected component H of the subgraph spanned by active triangles.
/// Boundary vertices touch at least one inactive triangle; boundary edges
/// lie in at most one active triangle; `boundary_loops` counts connected
/// components of the boundary-edge subgraph.
struct ComponentStats {
  std::vector<int> vertices;
  std::vector<int> edge_ids;
  std::vector<int> face_ids;
  int interior = 0;        // m
  int boundary = 0;        // k
  int boundary_loops = 0;  // l
  int triangles = 0;       // t
  int boundary_edges = 0;
  bool closed = false;
  bool edge_identity_ok = false;      // 2|E'| = k + 3t
  bool triangle_identity_ok = false;  // t = 2m + k + 2l - 4 (open), t = 2m - 4 (closed)
};

struct ActiveDecomposition {
  std::vector<ComponentStats> components;

  bool identities_ok() const {
    for (const auto& c : components)
      if (!c.edge_identity_ok || !c.triangle_identity_ok) return false;
    return true;
  }
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/// Removes inactive triangles together with edges and vertices belonging
/// only to them, then reports per-component counts and checks the counting
/// identities. Violations are recorded, not thrown.
inline ActiveDecomposition decompose_active_report(const OrientationGraph& g) {
  const int fcount = static_cast<int>(g.faces.rows());
  const int ecount = static_cast<int>(g.edges.rows());
  std::vector<char> active(fcount, 0);
  for (int f = 0; f < fcount; ++f) active[f] = face_active(g, f);

  std::vector<int> edge_active_faces(ecount, 0);
  for (int e = 0; e < ecount; ++e)
    for (int f : g.edge_face_list[e]) edge_active_faces[e] += active[f];

  detail::UnionFind uf(g.n);
  std::vector<char> edge_kept(ecount, 0);
  for (int e = 0; e < ecount; ++e) {
    if (edge_active_faces[e] == 0) continue;
    edge_kept[e] = 1;
    uf.unite(g.edges(e, 0), g.edges(e, 1));
  }

  std::vector<char> vertex_kept(g.n, 0);
  for (int f = 0; f < fcount; ++f)
    if (active[f])
      for (int k = 0; k < 3; ++k) vertex_kept[g.faces(f, k)] = 1;

  // Component labels keyed by union-find roots of kept vertices.
  std::vector<int> label(g.n, -1);
  int count = 0;
  for (int v = 0; v < g.n; ++v) {
    if (!vertex_kept[v]) continue;
    int root = uf.find(v);
    if (label[root] < 0) label[root] = count++;
  }

  ActiveDecomposition out;
  out.components.resize(count);
  auto component_of_vertex = [&](int v) { return label[uf.find(v)]; };

  for (int v = 0; v < g.n; ++v)
    if (vertex_kept[v]) out.components[component_of_vertex(v)].vertices.push_back(v);
  for (int e = 0; e < ecount; ++e)
    if (edge_kept[e]) out.components[component_of_vertex(g.edges(e, 0))].edge_ids.push_back(e);
  for (int f = 0; f < fcount; ++f)
    if (active[f]) out.components[component_of_vertex(g.faces(f, 0))].face_ids.push_back(f);

  for (auto& comp : out.components) {
    comp.triangles = static_cast<int>(comp.face_ids.size());

    // Boundary vertices: incident to at least one inactive triangle.
    std::vector<char> is_boundary_vertex(g.n, 0);
    for (int v : comp.vertices) {
      for (int f : g.vertex_faces[v])
        if (!active[f]) {
          is_boundary_vertex[v] = 1;
          break;
        }
    }
    comp.boundary = 0;
    for (int v : comp.vertices) comp.boundary += is_boundary_vertex[v];
    comp.interior = static_cast<int>(comp.vertices.size()) - comp.boundary;

    // Boundary edges live in exactly one active triangle.
    detail::UnionFind loop_uf(g.n);
    std::vector<int> boundary_vertex_list;
    comp.boundary_edges = 0;
    for (int e : comp.edge_ids) {
      if (edge_active_faces[e] != 1) continue;
      ++comp.boundary_edges;
      loop_uf.unite(g.edges(e, 0), g.edges(e, 1));
      boundary_vertex_list.push_back(g.edges(e, 0));
      boundary_vertex_list.push_back(g.edges(e, 1));
    }
    std::vector<char> seen_root(g.n, 0);
    comp.boundary_loops = 0;
    for (int v : boundary_vertex_list) {
      int root = loop_uf.find(v);
      if (!seen_root[root]) {
        seen_root[root] = 1;
        ++comp.boundary_loops;
      }
    }
    comp.closed = comp.boundary == 0;
    comp.edge_identity_ok = 2 * static_cast<int>(comp.edge_ids.size()) == comp.boundary + 3 * comp.triangles;
    comp.triangle_identity_ok =
        comp.closed ? comp.triangles == 2 * comp.interior - 4
                    : comp.triangles == 2 * comp.interior + comp.boundary + 2 * comp.boundary_loops - 4;
  }
  return out;
}

/// Throwing variant: a failed counting identity signals a bug or a
/// pathological (pinched) boundary.
inline ActiveDecomposition decompose_active(const OrientationGraph& g) {
  ActiveDecomposition d = decompose_active_report(g);
  for (std::size_t c = 0; c < d.components.size(); ++c) {
    const auto& comp = d.components[c];
    for (int v : comp.vertices) {
      bool on_boundary = false;
      for (int f : g.vertex_faces[v])
        if (!face_active(g, f)) on_boundary = true;
      if (on_boundary && g.live(v))
        throw Error(ErrorCode::IdentityViolation,
                    "boundary vertex " + std::to_string(v) + " of component " + std::to_string(c) + " is live");
    }
    if (!comp.edge_identity_ok)
      throw Error(ErrorCode::IdentityViolation,
                  "component " + std::to_string(c) + ": 2|E'| = " + std::to_string(2 * comp.edge_ids.size()) +
                      " but k + 3t = " + std::to_string(comp.boundary + 3 * comp.triangles));
    if (!comp.triangle_identity_ok)
      throw Error(ErrorCode::IdentityViolation,
                  "component " + std::to_string(c) + ": t = " + std::to_string(comp.triangles) +
                      " violates the Euler count (m = " + std::to_string(comp.interior) +
                      ", k = " + std::to_string(comp.boundary) + ", l = " + std::to_string(comp.boundary_loops) + ")");
  }
  return d;
}

}  // namespace riglab
