#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "riglab/core.hpp"
#include "riglab/polytope.hpp"

namespace riglab {

namespace detail {

template <typename Scalar>
struct HullState {
  const MatrixX3<Scalar>& pts;
  std::vector<std::array<int, 3>> faces;
  std::vector<char> alive;
  double diameter = 0.0;
  double eps = 0.0;

  explicit HullState(const MatrixX3<Scalar>& p) : pts(p) {}

  Vector3<Scalar> at(int i) const { return pts.row(i).transpose(); }

  Scalar orient(const std::array<int, 3>& face, int w) const {
    Vector3<Scalar> nrm = triangle_normal(pts, face[0], face[1], face[2]);
    return nrm.dot(Vector3<Scalar>(at(w) - at(face[0])));
  }

  bool visible(const std::array<int, 3>& face, int w) const {
    Scalar side = orient(face, w);
    if constexpr (is_floating_mode<Scalar>) {
      Vector3<Scalar> nrm = triangle_normal(pts, face[0], face[1], face[2]);
      double len = std::sqrt(to_double(Scalar(nrm.dot(nrm))));
      return to_double(side) > eps * diameter * len;
    } else {
      return side > Scalar(0);
    }
  }
};

}  // namespace detail

/// Incremental convex hull. Coplanar hull facets are merged into polygons
/// and re-triangulated; interior (and on-facet) points are discarded.
template <typename Scalar>
SimplicialPolytope<Scalar> convex_hull(const MatrixX3<Scalar>& points, const ToleranceConfig& config) {
  const int n = static_cast<int>(points.rows());
  if (n < 4) throw Error(ErrorCode::DegenerateInput, "need at least 4 points");
  if constexpr (is_floating_mode<Scalar>) {
    if (!points.allFinite()) throw Error(ErrorCode::BadParameter, "non-finite point coordinate");
  }

  // Drop exact duplicates, keeping first occurrences.
  std::vector<int> ids;
  {
    std::map<std::array<Scalar, 3>, int> seen;
    for (int i = 0; i < n; ++i) {
      std::array<Scalar, 3> key{points(i, 0), points(i, 1), points(i, 2)};
      if (seen.emplace(key, i).second) ids.push_back(i);
    }
  }
  if (static_cast<int>(ids.size()) < 4) throw Error(ErrorCode::DegenerateInput, "fewer than 4 distinct points");

  detail::HullState<Scalar> hull(points);
  hull.diameter = detail::approx_diameter(points);
  hull.eps = config.eps_convex;

  auto degenerate = [&](const Scalar& squared, double relative_scale) {
    if constexpr (is_floating_mode<Scalar>) {
      double threshold = config.eps_convex * relative_scale;
      return to_double(squared) <= threshold * threshold;
    } else {
      return squared == Scalar(0);
    }
  };

  // Initial simplex: lexicographic minimum, then extremes of distance, area, volume.
  int i0 = ids[0];
  for (int i : ids) {
    for (int c = 0; c < 3; ++c) {
      if (points(i, c) < points(i0, c)) { i0 = i; break; }
      if (points(i, c) > points(i0, c)) break;
    }
  }
  int i1 = -1;
  Scalar best_d(0);
  for (int i : ids) {
    if (i == i0) continue;
    Vector3<Scalar> d = hull.at(i) - hull.at(i0);
    Scalar sq = d.dot(d);
    if (i1 < 0 || sq > best_d) { i1 = i; best_d = sq; }
  }
  if (i1 < 0 || degenerate(best_d, hull.diameter)) throw Error(ErrorCode::DegenerateInput, "all points coincide");

  int i2 = -1;
  Scalar best_a(0);
  for (int i : ids) {
    if (i == i0 || i == i1) continue;
    Vector3<Scalar> c = Vector3<Scalar>(hull.at(i1) - hull.at(i0)).cross(Vector3<Scalar>(hull.at(i) - hull.at(i0)));
    Scalar sq = c.dot(c);
    if (i2 < 0 || sq > best_a) { i2 = i; best_a = sq; }
  }
  if (i2 < 0 || degenerate(best_a, hull.diameter * hull.diameter))
    throw Error(ErrorCode::DegenerateInput, "points are collinear");

  int i3 = -1;
  Scalar best_v(0);
  {
    Vector3<Scalar> nrm =
        Vector3<Scalar>(hull.at(i1) - hull.at(i0)).cross(Vector3<Scalar>(hull.at(i2) - hull.at(i0)));
    for (int i : ids) {
      if (i == i0 || i == i1 || i == i2) continue;
      Scalar vol = nrm.dot(Vector3<Scalar>(hull.at(i) - hull.at(i0)));
      Scalar sq = vol * vol;
      if (i3 < 0 || sq > best_v) { i3 = i; best_v = sq; }
    }
  }
  if (i3 < 0 || degenerate(best_v, hull.diameter * hull.diameter * hull.diameter))
    throw Error(ErrorCode::DegenerateInput, "points are coplanar");

  // Orient the four starting faces against the opposite vertex.
  const std::array<std::array<int, 4>, 4> combos{{{i0, i1, i2, i3}, {i0, i1, i3, i2}, {i0, i2, i3, i1}, {i1, i2, i3, i0}}};
  for (const auto& cm : combos) {
    std::array<int, 3> face{cm[0], cm[1], cm[2]};
    if (hull.orient(face, cm[3]) > Scalar(0)) std::swap(face[1], face[2]);
    hull.faces.push_back(face);
    hull.alive.push_back(1);
  }

  for (int p : ids) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (int fi = 0; fi < static_cast<int>(hull.faces.size()); ++fi)
      if (hull.alive[fi] && hull.visible(hull.faces[fi], p)) visible.push_back(fi);
    if (visible.empty()) continue;

    // Edge adjacency of the current hull.
    std::map<std::pair<int, int>, std::array<int, 2>> edge_faces;
    for (int fi = 0; fi < static_cast<int>(hull.faces.size()); ++fi) {
      if (!hull.alive[fi]) continue;
      for (int k = 0; k < 3; ++k) {
        auto key = std::minmax(hull.faces[fi][k], hull.faces[fi][(k + 1) % 3]);
        auto [it, fresh] = edge_faces.emplace(key, std::array<int, 2>{fi, -1});
        if (!fresh) it->second[1] = fi;
      }
    }
    std::set<int> visible_set(visible.begin(), visible.end());
    std::vector<std::array<int, 3>> fresh_faces;
    for (int fi : visible) {
      for (int k = 0; k < 3; ++k) {
        int u = hull.faces[fi][k], v = hull.faces[fi][(k + 1) % 3];
        auto& pair = edge_faces.at(std::minmax(u, v));
        int other = pair[0] == fi ? pair[1] : pair[0];
        if (other >= 0 && !visible_set.count(other)) fresh_faces.push_back({u, v, p});
      }
    }
    if (fresh_faces.empty()) continue;  // inside within tolerance
    for (int fi : visible) hull.alive[fi] = 0;
    for (const auto& face : fresh_faces) {
      hull.faces.push_back(face);
      hull.alive.push_back(1);
    }
  }

  std::vector<std::array<int, 3>> tris;
  for (int fi = 0; fi < static_cast<int>(hull.faces.size()); ++fi)
    if (hull.alive[fi]) tris.push_back(hull.faces[fi]);

  // Merge coplanar neighbours into polygon facets.
  const int ft = static_cast<int>(tris.size());
  auto coplanar = [&](int f, int g) {
    Vector3<Scalar> nf = detail::triangle_normal(points, tris[f][0], tris[f][1], tris[f][2]);
    Vector3<Scalar> ng = detail::triangle_normal(points, tris[g][0], tris[g][1], tris[g][2]);
    if (!(nf.dot(ng) > Scalar(0))) return false;
    Vector3<Scalar> a = hull.at(tris[f][0]);
    for (int k = 0; k < 3; ++k) {
      Scalar off = nf.dot(Vector3<Scalar>(hull.at(tris[g][k]) - a));
      if constexpr (is_floating_mode<Scalar>) {
        double len = std::sqrt(to_double(Scalar(nf.dot(nf))));
        if (std::abs(to_double(off)) > config.eps_convex * hull.diameter * len) return false;
      } else {
        if (off != Scalar(0)) return false;
      }
    }
    return true;
  };

  std::map<std::pair<int, int>, std::array<int, 2>> adjacency;
  for (int fi = 0; fi < ft; ++fi)
    for (int k = 0; k < 3; ++k) {
      auto key = std::minmax(tris[fi][k], tris[fi][(k + 1) % 3]);
      auto [it, fresh] = adjacency.emplace(key, std::array<int, 2>{fi, -1});
      if (!fresh) it->second[1] = fi;
    }

  std::vector<int> group(ft, -1);
  int groups = 0;
  for (int fi = 0; fi < ft; ++fi) {
    if (group[fi] >= 0) continue;
    std::vector<int> stack{fi};
    group[fi] = groups;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int k = 0; k < 3; ++k) {
        auto key = std::minmax(tris[cur][k], tris[cur][(k + 1) % 3]);
        const auto& pair = adjacency.at(key);
        int other = pair[0] == cur ? pair[1] : pair[0];
        if (other >= 0 && group[other] < 0 && coplanar(fi, other)) {
          group[other] = groups;
          stack.push_back(other);
        }
      }
    }
    ++groups;
  }

  std::vector<std::vector<int>> cycles;
  for (int g = 0; g < groups; ++g) {
    std::vector<int> members;
    for (int fi = 0; fi < ft; ++fi)
      if (group[fi] == g) members.push_back(fi);
    if (members.size() == 1) {
      const auto& t = tris[members[0]];
      cycles.push_back({t[0], t[1], t[2]});
      continue;
    }
    // Boundary of the merged region, walked as one directed cycle.
    std::set<std::pair<int, int>> directed;
    for (int fi : members)
      for (int k = 0; k < 3; ++k) directed.emplace(tris[fi][k], tris[fi][(k + 1) % 3]);
    std::map<int, int> next;
    for (const auto& [u, v] : directed) {
      if (directed.count({v, u})) continue;  // interior diagonal
      if (next.count(u)) throw Error(ErrorCode::DegenerateInput, "hull facet merge produced a pinched facet");
      next[u] = v;
    }
    if (next.empty()) throw Error(ErrorCode::DegenerateInput, "hull facet merge produced a closed region");
    int start = next.begin()->first;
    std::vector<int> cycle{start};
    for (int cur = next.at(start); cur != start; cur = next.at(cur)) {
      cycle.push_back(cur);
      if (cycle.size() > next.size()) throw Error(ErrorCode::DegenerateInput, "hull facet boundary is not a cycle");
    }
    if (cycle.size() != next.size()) throw Error(ErrorCode::DegenerateInput, "hull facet boundary is disconnected");
    cycles.push_back(cycle);
  }

  // Keep only vertices referenced by the merged facets, in input order.
  std::set<int> used;
  for (const auto& cycle : cycles) used.insert(cycle.begin(), cycle.end());
  std::map<int, int> remap;
  MatrixX3<Scalar> verts(static_cast<int>(used.size()), 3);
  int next_id = 0;
  for (int id : used) {
    verts.row(next_id) = points.row(id);
    remap[id] = next_id++;
  }
  GeneralPolytope<Scalar> gp;
  gp.vertices = verts;
  for (auto& cycle : cycles) {
    for (int& v : cycle) v = remap.at(v);
    gp.faces.push_back(cycle);
  }
  return triangulate_faces(gp, config);
}

}  // namespace riglab
