#pragma once

#include <cstdint>
#include <optional>

#include "riglab/core.hpp"
#include "riglab/orientation.hpp"

namespace riglab {

/// Inversions are counted in integer half-units: 2 half-units = one
/// inversion, 1 = a half-inversion. The counting identities are integer
/// equalities, so no floating fractions appear anywhere in these counts.
struct HalfCount {
  std::int64_t half_units = 0;

  HalfCount& operator+=(HalfCount other) {
    half_units += other.half_units;
    return *this;
  }
  friend HalfCount operator+(HalfCount a, HalfCount b) { return {a.half_units + b.half_units}; }
  friend auto operator<=>(const HalfCount&, const HalfCount&) = default;
};

/// Half-units contributed by the two edges of `face` meeting at `apex`:
///   - one oriented in, one out        -> one inversion   (2)
///   - both in or both out             -> zero            (0)
///   - exactly one oriented            -> half-inversion  (1)
///   - both unoriented, apex live      -> one inversion   (2)
///   - both unoriented, apex dead      -> zero            (0)
inline HalfCount corner_inversions(const OrientationGraph& g, int face, int apex) {
  int slot = -1;
  for (int k = 0; k < 3; ++k)
    if (g.faces(face, k) == apex) slot = k;
  if (slot < 0) throw Error(ErrorCode::BadParameter, "apex is not a vertex of the face");
  const int e1 = g.face_edges(face, (slot + 1) % 3);
  const int e2 = g.face_edges(face, (slot + 2) % 3);
  const int d1 = g.arc_at(e1, apex);
  const int d2 = g.arc_at(e2, apex);
  if (d1 != 0 && d2 != 0) return {d1 != d2 ? 2 : 0};
  if (d1 != 0 || d2 != 0) return {1};
  return {g.live(apex) ? 2 : 0};
}

inline HalfCount triangle_inversions(const OrientationGraph& g, int face) {
  std::int64_t total = 0;
  for (int k = 0; k < 3; ++k) total += corner_inversions(g, face, g.faces(face, k)).half_units;
  return {total};
}

inline HalfCount vertex_inversions(const OrientationGraph& g, int v) {
  std::int64_t total = 0;
  for (int face : g.vertex_faces[v]) total += corner_inversions(g, face, v).half_units;
  return {total};
}

inline HalfCount total_inversions(const OrientationGraph& g) {
  std::int64_t total = 0;
  for (int f = 0; f < g.faces.rows(); ++f) total += triangle_inversions(g, f).half_units;
  return {total};
}

inline bool face_active(const OrientationGraph& g, int face) {
  return g.live(g.faces(face, 0)) || g.live(g.faces(face, 1)) || g.live(g.faces(face, 2));
}

/// Every active triangle (one with a live vertex) must carry at least one
/// inversion. Returns the first violating face, or nullopt on pass.
inline std::optional<int> audit_triangle_floor(const OrientationGraph& g) {
  for (int f = 0; f < g.faces.rows(); ++f)
    if (face_active(g, f) && triangle_inversions(g, f).half_units < 2) return f;
  return std::nullopt;
}

/// Live vertices carry at most two inversions, dead vertices none.
/// Returns the first violating vertex, or nullopt on pass.
inline std::optional<int> audit_vertex_cap(const OrientationGraph& g) {
  for (int v = 0; v < g.n; ++v) {
    const std::int64_t half = vertex_inversions(g, v).half_units;
    if (g.live(v) ? half > 4 : half != 0) return v;
  }
  return std::nullopt;
}

}  // namespace riglab
