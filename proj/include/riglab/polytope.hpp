#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "riglab/core.hpp"

namespace riglab {

/// Closed oriented surface with convex planar polygon faces, each cycle
/// listed counter-clockwise seen from outside.
template <typename Scalar>
struct GeneralPolytope {
  MatrixX3<Scalar> vertices;
  std::vector<std::vector<int>> faces;
};

/// Triangulated convex (or flat-vertex, strict = false) polytope together
/// with the derived edge list and adjacency used everywhere downstream.
template <typename Scalar>
struct SimplicialPolytope {
  MatrixX3<Scalar> vertices;  // n x 3
  MatrixX3i faces;            // f x 3, outward oriented
  MatrixX2i edges;            // m x 2, i < j, lexicographically sorted
  Eigen::Vector3i base;       // vertex triple of the base triangle
  int base_face = 0;
  bool strict = true;
  double diameter = 0.0;  // max pairwise vertex distance (approximate in exact mode)

  MatrixX2i edge_faces;                  // m x 2 incident faces per edge
  MatrixX3i face_edges;                  // f x 3, entry k = edge opposite corner k
  std::vector<std::vector<int>> vertex_faces;

  int vertex_count() const { return static_cast<int>(vertices.rows()); }
  int edge_count() const { return static_cast<int>(edges.rows()); }
  int face_count() const { return static_cast<int>(faces.rows()); }

  Vector3<Scalar> vertex(int i) const { return vertices.row(i).transpose(); }

  int edge_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    int lo = 0, hi = edge_count();
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (edges(mid, 0) < i || (edges(mid, 0) == i && edges(mid, 1) < j))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < edge_count() && edges(lo, 0) == i && edges(lo, 1) == j) return lo;
    throw Error(ErrorCode::BadParameter, "no such edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }

  /// The two edges of face f incident to the corner at slot k.
  std::pair<int, int> corner_edges(int f, int k) const {
    return {face_edges(f, (k + 1) % 3), face_edges(f, (k + 2) % 3)};
  }
};

namespace detail {

template <typename Scalar>
double approx_diameter(const MatrixX3<Scalar>& vertices) {
  const int n = static_cast<int>(vertices.rows());
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vector3<Scalar> d = (vertices.row(i) - vertices.row(j)).transpose();
      double sq = to_double(Scalar(d.dot(d)));
      best = std::max(best, sq);
    }
  return std::sqrt(best);
}

template <typename Scalar>
Vector3<Scalar> triangle_normal(const MatrixX3<Scalar>& v, int a, int b, int c) {
  Vector3<Scalar> ab = (v.row(b) - v.row(a)).transpose();
  Vector3<Scalar> ac = (v.row(c) - v.row(a)).transpose();
  return ab.cross(ac);
}

struct EdgeUse {
  int faces[2] = {-1, -1};
  int forward = 0;  // directed (i, j) with i < j
  int backward = 0;
  int count = 0;
};

using EdgeMap = std::map<std::pair<int, int>, EdgeUse>;

inline void record_edge(EdgeMap& map, int u, int v, int face) {
  auto key = std::minmax(u, v);
  EdgeUse& use = map[key];
  if (use.count < 2) use.faces[use.count] = face;
  ++use.count;
  if (u < v)
    ++use.forward;
  else
    ++use.backward;
}

}  // namespace detail

/// Validates and assembles a simplicial polytope. Checks manifoldness,
/// Euler's relation, the 2n - 4 triangle count, outward orientation, and
/// (when strict) the convexity margin.
template <typename Scalar>
SimplicialPolytope<Scalar> build_polytope(const MatrixX3<Scalar>& vertices, const MatrixX3i& faces,
                                          const Eigen::Vector3i& base, const ToleranceConfig& config,
                                          bool strict = true) {
  const int n = static_cast<int>(vertices.rows());
  const int f = static_cast<int>(faces.rows());
  if (n < 4) throw Error(ErrorCode::BadParameter, "need at least 4 vertices, got " + std::to_string(n));
  if constexpr (is_floating_mode<Scalar>) {
    if (!vertices.allFinite()) throw Error(ErrorCode::BadParameter, "non-finite vertex coordinate");
  }
  for (int i = 0; i < f; ++i) {
    std::array<int, 3> t{faces(i, 0), faces(i, 1), faces(i, 2)};
    for (int idx : t)
      if (idx < 0 || idx >= n)
        throw Error(ErrorCode::BadParameter, "face " + std::to_string(i) + " has vertex index out of range");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(i) + " repeats a vertex");
  }

  SimplicialPolytope<Scalar> p;
  p.vertices = vertices;
  p.faces = faces;
  p.strict = strict;
  p.diameter = detail::approx_diameter(vertices);

  // Face areas.
  for (int i = 0; i < f; ++i) {
    Vector3<Scalar> nrm = detail::triangle_normal(vertices, faces(i, 0), faces(i, 1), faces(i, 2));
    if constexpr (is_floating_mode<Scalar>) {
      double area2 = std::sqrt(to_double(Scalar(nrm.dot(nrm))));
      if (area2 <= config.eps_convex * p.diameter * p.diameter)
        throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(i) + " has (near) zero area");
    } else {
      if (nrm.dot(nrm) == Scalar(0))
        throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(i) + " has zero area");
    }
  }

  // Manifold structure: every undirected edge in exactly two faces, once per direction.
  detail::EdgeMap edge_map;
  for (int i = 0; i < f; ++i)
    for (int k = 0; k < 3; ++k) detail::record_edge(edge_map, faces(i, k), faces(i, (k + 1) % 3), i);
  for (const auto& [key, use] : edge_map) {
    if (use.count != 2)
      throw Error(ErrorCode::NonManifold, "edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                              ") lies in " + std::to_string(use.count) + " faces");
    if (use.forward != 1 || use.backward != 1)
      throw Error(ErrorCode::NonManifold, "edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                              ") is traversed twice in the same direction");
  }

  const int m = static_cast<int>(edge_map.size());
  if (n - m + f != 2)
    throw Error(ErrorCode::EulerViolation, "V - E + F = " + std::to_string(n - m + f) + ", expected 2");
  if (f != 2 * n - 4)
    throw Error(ErrorCode::EulerViolation,
                "triangle count " + std::to_string(f) + " differs from 2n - 4 = " + std::to_string(2 * n - 4));

  p.edges.resize(m, 2);
  p.edge_faces.resize(m, 2);
  int e = 0;
  std::map<std::pair<int, int>, int> edge_ids;
  for (const auto& [key, use] : edge_map) {
    p.edges(e, 0) = key.first;
    p.edges(e, 1) = key.second;
    p.edge_faces(e, 0) = std::min(use.faces[0], use.faces[1]);
    p.edge_faces(e, 1) = std::max(use.faces[0], use.faces[1]);
    edge_ids[key] = e;
    ++e;
  }
  p.face_edges.resize(f, 3);
  for (int i = 0; i < f; ++i)
    for (int k = 0; k < 3; ++k)
      p.face_edges(i, k) = edge_ids.at(std::minmax(faces(i, (k + 1) % 3), faces(i, (k + 2) % 3)));
  p.vertex_faces.assign(n, {});
  for (int i = 0; i < f; ++i)
    for (int k = 0; k < 3; ++k) p.vertex_faces[faces(i, k)].push_back(i);

  // Outward orientation: every face sees the vertex centroid on its inner side.
  Vector3<Scalar> centroid = Vector3<Scalar>::Zero();
  for (int i = 0; i < n; ++i) centroid += vertices.row(i).transpose();
  centroid /= Scalar(n);
  for (int i = 0; i < f; ++i) {
    Vector3<Scalar> nrm = detail::triangle_normal(vertices, faces(i, 0), faces(i, 1), faces(i, 2));
    Vector3<Scalar> a = vertices.row(faces(i, 0)).transpose();
    Scalar vol = nrm.dot(Vector3<Scalar>(a - centroid));
    if (!(vol > Scalar(0)))
      throw Error(ErrorCode::BadOrientation, "face " + std::to_string(i) + " does not face away from the centroid");
  }

  if (strict) {
    for (int i = 0; i < f; ++i) {
      Vector3<Scalar> nrm = detail::triangle_normal(vertices, faces(i, 0), faces(i, 1), faces(i, 2));
      Vector3<Scalar> a = vertices.row(faces(i, 0)).transpose();
      for (int w = 0; w < n; ++w) {
        if (w == faces(i, 0) || w == faces(i, 1) || w == faces(i, 2)) continue;
        Scalar side = nrm.dot(Vector3<Scalar>(vertices.row(w).transpose() - a));
        if constexpr (is_floating_mode<Scalar>) {
          double margin = to_double(side) / std::sqrt(to_double(Scalar(nrm.dot(nrm))));
          if (margin > -config.eps_convex * p.diameter)
            throw Error(ErrorCode::NotConvex, "vertex " + std::to_string(w) + " is not strictly inside face " +
                                                  std::to_string(i) + " plane (margin " + std::to_string(margin) + ")");
        } else {
          if (!(side < Scalar(0)))
            throw Error(ErrorCode::NotConvex,
                        "vertex " + std::to_string(w) + " is not strictly inside face " + std::to_string(i) + " plane");
        }
      }
    }
  }

  // Base triangle must be one of the faces.
  std::array<int, 3> want{base(0), base(1), base(2)};
  std::sort(want.begin(), want.end());
  if (want[0] == want[1] || want[1] == want[2])
    throw Error(ErrorCode::BadParameter, "base vertices must be distinct");
  p.base_face = -1;
  for (int i = 0; i < f; ++i) {
    std::array<int, 3> have{faces(i, 0), faces(i, 1), faces(i, 2)};
    std::sort(have.begin(), have.end());
    if (have == want) {
      p.base_face = i;
      break;
    }
  }
  if (p.base_face < 0)
    throw Error(ErrorCode::BaseNotAFace, "base (" + std::to_string(base(0)) + "," + std::to_string(base(1)) + "," +
                                             std::to_string(base(2)) + ") is not a face");
  p.base = base;
  return p;
}

template <typename Scalar>
SimplicialPolytope<Scalar> build_polytope(const MatrixX3<Scalar>& vertices, const MatrixX3i& faces,
                                          const ToleranceConfig& config, bool strict = true) {
  if (faces.rows() == 0) throw Error(ErrorCode::BadParameter, "no faces");
  return build_polytope<Scalar>(vertices, faces, faces.row(0).transpose(), config, strict);
}

namespace detail {

template <typename Scalar>
void validate_general(const GeneralPolytope<Scalar>& gp, const ToleranceConfig& config) {
  const int n = static_cast<int>(gp.vertices.rows());
  const int f = static_cast<int>(gp.faces.size());
  if (n < 4) throw Error(ErrorCode::BadParameter, "need at least 4 vertices");
  EdgeMap edge_map;
  for (int i = 0; i < f; ++i) {
    const auto& cycle = gp.faces[i];
    const int k = static_cast<int>(cycle.size());
    if (k < 3) throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(i) + " has fewer than 3 vertices");
    for (int idx : cycle)
      if (idx < 0 || idx >= n)
        throw Error(ErrorCode::BadParameter, "face " + std::to_string(i) + " has vertex index out of range");
    std::vector<int> sorted(cycle);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(i) + " repeats a vertex");
    for (int j = 0; j < k; ++j) record_edge(edge_map, cycle[j], cycle[(j + 1) % k], i);
  }
  for (const auto& [key, use] : edge_map) {
    if (use.count != 2 || use.forward != 1 || use.backward != 1)
      throw Error(ErrorCode::NonManifold, "edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                              ") is not shared by exactly two opposite face cycles");
  }
  const int m = static_cast<int>(edge_map.size());
  if (n - m + f != 2)
    throw Error(ErrorCode::EulerViolation, "V - E + F = " + std::to_string(n - m + f) + ", expected 2");

  // Planarity of every polygon face, relative to the diameter.
  const double diameter = approx_diameter(gp.vertices);
  for (int i = 0; i < f; ++i) {
    const auto& cycle = gp.faces[i];
    const int k = static_cast<int>(cycle.size());
    if (k == 3) continue;
    if constexpr (is_floating_mode<Scalar>) {
      // Newell normal.
      Vector3<Scalar> nrm = Vector3<Scalar>::Zero();
      for (int j = 0; j < k; ++j) {
        Vector3<Scalar> a = gp.vertices.row(cycle[j]).transpose();
        Vector3<Scalar> b = gp.vertices.row(cycle[(j + 1) % k]).transpose();
        nrm += a.cross(b);
      }
      double len = std::sqrt(to_double(Scalar(nrm.dot(nrm))));
      if (len == 0) throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(i) + " has zero area");
      Vector3<Scalar> a0 = gp.vertices.row(cycle[0]).transpose();
      for (int j = 1; j < k; ++j) {
        double off = to_double(Scalar(nrm.dot(Vector3<Scalar>(gp.vertices.row(cycle[j]).transpose() - a0)))) / len;
        if (std::abs(off) > std::max(config.eps_convex, 1e-9) * diameter)
          throw Error(ErrorCode::NonPlanarFace, "face " + std::to_string(i) + " deviates from planarity by " +
                                                    std::to_string(off));
      }
    } else {
      Vector3<Scalar> a0 = gp.vertices.row(cycle[0]).transpose();
      Vector3<Scalar> nrm = triangle_normal(gp.vertices, cycle[0], cycle[1], cycle[2]);
      for (int j = 3; j < k; ++j)
        if (nrm.dot(Vector3<Scalar>(gp.vertices.row(cycle[j]).transpose() - a0)) != Scalar(0))
          throw Error(ErrorCode::NonPlanarFace, "face " + std::to_string(i) + " is not planar");
    }
  }
}

}  // namespace detail

/// Replaces every k-gon face by k - 2 triangles, fanned from its
/// lowest-index vertex. Identity on already triangular input. The result is
/// strict only when no diagonals were added and the strict margin holds.
template <typename Scalar>
SimplicialPolytope<Scalar> triangulate_faces(const GeneralPolytope<Scalar>& gp, const ToleranceConfig& config) {
  detail::validate_general(gp, config);
  std::vector<std::array<int, 3>> tris;
  bool added_diagonal = false;
  for (const auto& cycle : gp.faces) {
    const int k = static_cast<int>(cycle.size());
    if (k == 3) {
      tris.push_back({cycle[0], cycle[1], cycle[2]});
      continue;
    }
    added_diagonal = true;
    int anchor = static_cast<int>(std::min_element(cycle.begin(), cycle.end()) - cycle.begin());
    for (int j = 1; j + 1 < k; ++j) {
      int a = cycle[anchor];
      int b = cycle[(anchor + j) % k];
      int c = cycle[(anchor + j + 1) % k];
      tris.push_back({a, b, c});
    }
  }
  MatrixX3i faces(static_cast<int>(tris.size()), 3);
  for (int i = 0; i < static_cast<int>(tris.size()); ++i)
    for (int k = 0; k < 3; ++k) faces(i, k) = tris[i][k];

  if (!added_diagonal) {
    try {
      return build_polytope<Scalar>(gp.vertices, faces, config, /*strict=*/true);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NotConvex) throw;
    }
  }
  return build_polytope<Scalar>(gp.vertices, faces, config, /*strict=*/false);
}

/// Total face area; polygon faces measured by the shoelace formula.
template <typename Scalar>
double surface_area(const GeneralPolytope<Scalar>& gp) {
  double total = 0.0;
  for (const auto& cycle : gp.faces) {
    Vector3<Scalar> nrm = Vector3<Scalar>::Zero();
    const int k = static_cast<int>(cycle.size());
    for (int j = 0; j < k; ++j) {
      Vector3<Scalar> a = gp.vertices.row(cycle[j]).transpose();
      Vector3<Scalar> b = gp.vertices.row(cycle[(j + 1) % k]).transpose();
      nrm += a.cross(b);
    }
    total += 0.5 * std::sqrt(to_double(Scalar(nrm.dot(nrm))));
  }
  return total;
}

template <typename Scalar>
double surface_area(const SimplicialPolytope<Scalar>& p) {
  double total = 0.0;
  for (int i = 0; i < p.face_count(); ++i) {
    Vector3<Scalar> nrm = detail::triangle_normal(p.vertices, p.faces(i, 0), p.faces(i, 1), p.faces(i, 2));
    total += 0.5 * std::sqrt(to_double(Scalar(nrm.dot(nrm))));
  }
  return total;
}

}  // namespace riglab
