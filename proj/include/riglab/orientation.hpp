#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "riglab/core.hpp"
#include "riglab/polytope.hpp"

namespace riglab {

enum class EdgeOrientation {
  Unoriented,  // both projections zero
  Forward,     // both negative: arc i -> j (i < j)
  Backward,    // both positive: arc j -> i
};

struct EdgeClass {
  EdgeOrientation orientation = EdgeOrientation::Unoriented;
  double proj_i = 0.0;  // (v_i - v_j, a_i), i < j
  double proj_j = 0.0;  // (v_i - v_j, a_j)
};

enum class VertexState { Dead, Live };

/// Combinatorial record of a classified velocity field: per-edge orientation
/// plus per-vertex live/dead status, together with the incidence needed by
/// the counting audits. Self-contained so synthetic graphs can be built in
/// tests without a polytope.
struct OrientationGraph {
  int n = 0;
  MatrixX2i edges;
  MatrixX3i faces;
  std::vector<EdgeClass> edge_classes;
  std::vector<VertexState> statuses;

  MatrixX3i face_edges;  // entry k = edge opposite corner k
  std::vector<std::vector<int>> vertex_faces;
  std::vector<std::vector<int>> edge_face_list;

  bool live(int v) const { return statuses[v] == VertexState::Live; }

  int live_count() const {
    int c = 0;
    for (const auto& s : statuses) c += s == VertexState::Live;
    return c;
  }

  /// Arc endpoint bookkeeping: -1 oriented into `vertex`, +1 out of it,
  /// 0 unoriented. `vertex` must be an endpoint of the edge.
  int arc_at(int edge, int vertex) const {
    const EdgeClass& ec = edge_classes[edge];
    if (ec.orientation == EdgeOrientation::Unoriented) return 0;
    const bool at_low = edges(edge, 0) == vertex;
    const bool into_low = ec.orientation == EdgeOrientation::Backward;
    return (at_low == into_low) ? -1 : 1;
  }
};

struct MixedSignsInfo {
  int edge = 0;
  int i = 0, j = 0;
  double proj_i = 0.0, proj_j = 0.0;
};

/// classify_edges either yields a graph or rejects the field as outside the
/// admissible set; rejection is an input property, not a failure.
struct ClassifyResult {
  std::optional<OrientationGraph> graph;
  std::optional<MixedSignsInfo> mixed;
  bool admissible() const { return graph.has_value(); }
};

inline OrientationGraph make_orientation_graph(int n, const MatrixX2i& edges, const MatrixX3i& faces,
                                               std::vector<EdgeClass> classes, std::vector<VertexState> statuses) {
  if (static_cast<int>(classes.size()) != edges.rows() || static_cast<int>(statuses.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "edge class or status list has wrong length");
  OrientationGraph g;
  g.n = n;
  g.edges = edges;
  g.faces = faces;
  g.edge_classes = std::move(classes);
  g.statuses = std::move(statuses);

  std::map<std::pair<int, int>, int> edge_ids;
  for (int e = 0; e < edges.rows(); ++e) {
    if (edges(e, 0) >= edges(e, 1)) throw Error(ErrorCode::BadParameter, "edges must be stored with i < j");
    edge_ids[{edges(e, 0), edges(e, 1)}] = e;
  }
  g.face_edges.resize(faces.rows(), 3);
  g.vertex_faces.assign(n, {});
  g.edge_face_list.assign(edges.rows(), {});
  for (int f = 0; f < faces.rows(); ++f) {
    for (int k = 0; k < 3; ++k) {
      auto key = std::minmax(faces(f, (k + 1) % 3), faces(f, (k + 2) % 3));
      auto it = edge_ids.find(key);
      if (it == edge_ids.end()) throw Error(ErrorCode::BadParameter, "face references a missing edge");
      g.face_edges(f, k) = it->second;
      g.edge_face_list[it->second].push_back(f);
      g.vertex_faces[faces(f, k)].push_back(f);
    }
  }
  // Dead vertices must not carry oriented edges.
  for (int e = 0; e < edges.rows(); ++e) {
    if (g.edge_classes[e].orientation == EdgeOrientation::Unoriented) continue;
    if (!g.live(edges(e, 0)) || !g.live(edges(e, 1)))
      throw Error(ErrorCode::BadParameter, "oriented edge incident to a dead vertex");
  }
  return g;
}

/// Dead iff the velocity vanishes (within eps_sign * diameter in floating
/// mode, exactly in rational mode).
template <typename Scalar>
std::vector<VertexState> vertex_statuses(const SimplicialPolytope<Scalar>& p, const VelocityField<Scalar>& field,
                                         const ToleranceConfig& config) {
  if (field.rows() != p.vertex_count())
    throw Error(ErrorCode::DimensionMismatch, "field size does not match vertex count");
  std::vector<VertexState> statuses(p.vertex_count(), VertexState::Dead);
  for (int i = 0; i < p.vertex_count(); ++i) {
    if constexpr (is_floating_mode<Scalar>) {
      double mag = std::sqrt(to_double(Scalar(field.row(i).dot(field.row(i)))));
      statuses[i] = mag <= config.eps_sign * p.diameter ? VertexState::Dead : VertexState::Live;
    } else {
      bool zero = field(i, 0) == Scalar(0) && field(i, 1) == Scalar(0) && field(i, 2) == Scalar(0);
      statuses[i] = zero ? VertexState::Dead : VertexState::Live;
    }
  }
  return statuses;
}

/// Orients every edge by the common sign of the two endpoint projections
/// onto it: both zero leaves it unoriented, both negative orients i -> j,
/// both positive j -> i. Disagreeing signs reject the field.
template <typename Scalar>
ClassifyResult classify_edges(const SimplicialPolytope<Scalar>& p, const VelocityField<Scalar>& field,
                              const ToleranceConfig& config) {
  if (field.rows() != p.vertex_count())
    throw Error(ErrorCode::DimensionMismatch, "field size does not match vertex count");
  std::vector<EdgeClass> classes(p.edge_count());
  ClassifyResult result;
  for (int e = 0; e < p.edge_count(); ++e) {
    const int i = p.edges(e, 0), j = p.edges(e, 1);
    RowVector3<Scalar> d = p.vertices.row(i) - p.vertices.row(j);
    Scalar pi = d.dot(field.row(i));
    Scalar pj = d.dot(field.row(j));
    int si = 0, sj = 0;
    if constexpr (is_floating_mode<Scalar>) {
      const double edge_len = std::sqrt(to_double(Scalar(d.dot(d))));
      const double ai = std::sqrt(to_double(Scalar(field.row(i).dot(field.row(i)))));
      const double aj = std::sqrt(to_double(Scalar(field.row(j).dot(field.row(j)))));
      // One shared threshold per edge keeps the two projections of a kernel
      // field (which are equal) on the same side of the zero band.
      const double zero_band = config.eps_sign * edge_len * std::max({ai, aj, p.diameter});
      si = std::abs(to_double(pi)) <= zero_band ? 0 : sign_of(pi);
      sj = std::abs(to_double(pj)) <= zero_band ? 0 : sign_of(pj);
    } else {
      si = sign_of(pi);
      sj = sign_of(pj);
    }
    classes[e].proj_i = to_double(pi);
    classes[e].proj_j = to_double(pj);
    if (si == 0 && sj == 0)
      classes[e].orientation = EdgeOrientation::Unoriented;
    else if (si < 0 && sj < 0)
      classes[e].orientation = EdgeOrientation::Forward;
    else if (si > 0 && sj > 0)
      classes[e].orientation = EdgeOrientation::Backward;
    else {
      result.mixed = MixedSignsInfo{e, i, j, to_double(pi), to_double(pj)};
      return result;
    }
  }
  result.graph =
      make_orientation_graph(p.vertex_count(), p.edges, p.faces, std::move(classes), vertex_statuses(p, field, config));
  return result;
}

}  // namespace riglab
