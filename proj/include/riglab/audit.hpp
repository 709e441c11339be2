#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "riglab/core.hpp"
#include "riglab/decompose.hpp"
#include "riglab/inversions.hpp"
#include "riglab/orientation.hpp"

namespace riglab {

enum class AuditVerdict {
  AllDead,
  Pass,                    // live vertices, no check violated
  Inadmissible,            // a projection pair with mixed signs
  TriangleFloorViolation,  // an active triangle with fewer than 2 half-units
  VertexCapViolation,      // a live vertex above 4 half-units or a dead one above 0
  CountingContradiction,   // a counting identity or the global bound failed
};

inline const char* name(AuditVerdict verdict) {
  switch (verdict) {
    case AuditVerdict::AllDead: return "all_dead";
    case AuditVerdict::Pass: return "pass";
    case AuditVerdict::Inadmissible: return "inadmissible";
    case AuditVerdict::TriangleFloorViolation: return "triangle_floor_violation";
    case AuditVerdict::VertexCapViolation: return "vertex_cap_violation";
    case AuditVerdict::CountingContradiction: return "counting_contradiction";
  }
  return "unknown";
}

struct AuditReport {
  bool admissible = false;
  bool planted = false;
  AuditVerdict verdict = AuditVerdict::AllDead;

  std::optional<MixedSignsInfo> mixed;
  std::optional<int> violation_face;
  std::optional<int> violation_vertex;
  std::string detail;

  std::vector<std::int64_t> vertex_half_units;
  std::vector<std::int64_t> face_half_units;
  std::int64_t total_half_units = 0;
  std::vector<char> live;
  int live_count = 0;

  ActiveDecomposition decomposition;
  bool identities_ok = true;

  // Aggregate bookkeeping in half-units: the lower bound sums, per open
  // component touching an inactive triangle with k >= 3, the contradiction
  // floor 2m + 1 inversions, and otherwise the per-triangle floor t; the
  // upper bound allows two inversions per live vertex.
  std::int64_t lower_bound_half_units = 0;
  std::int64_t upper_bound_half_units = 0;
};

/// Runs the whole certificate pipeline on one field: classification,
/// planted-ness, inversion counts, both audits, decomposition and the
/// counting bounds. The first failed check decides the verdict.
template <typename Scalar>
AuditReport global_audit(const SimplicialPolytope<Scalar>& p, const VelocityField<Scalar>& field,
                         const Eigen::Vector3i& base, const ToleranceConfig& config) {
  AuditReport report;
  std::vector<VertexState> statuses = vertex_statuses(p, field, config);
  report.live.assign(statuses.size(), 0);
  for (std::size_t v = 0; v < statuses.size(); ++v) report.live[v] = statuses[v] == VertexState::Live;
  report.planted = statuses[base(0)] == VertexState::Dead && statuses[base(1)] == VertexState::Dead &&
                   statuses[base(2)] == VertexState::Dead;

  ClassifyResult classified = classify_edges(p, field, config);
  report.admissible = classified.admissible();
  if (!report.admissible) {
    report.mixed = classified.mixed;
    report.verdict = AuditVerdict::Inadmissible;
    report.detail = "projections disagree on edge " + std::to_string(classified.mixed->edge);
    return report;
  }
  const OrientationGraph& g = *classified.graph;

  report.live_count = g.live_count();
  report.vertex_half_units.resize(g.n);
  for (int v = 0; v < g.n; ++v) report.vertex_half_units[v] = vertex_inversions(g, v).half_units;
  report.face_half_units.resize(g.faces.rows());
  for (int f = 0; f < g.faces.rows(); ++f) report.face_half_units[f] = triangle_inversions(g, f).half_units;
  report.total_half_units = total_inversions(g).half_units;

  report.decomposition = decompose_active_report(g);
  report.identities_ok = report.decomposition.identities_ok();
  report.upper_bound_half_units = 4 * static_cast<std::int64_t>(report.live_count);
  report.lower_bound_half_units = 0;
  for (const auto& comp : report.decomposition.components) {
    if (!comp.closed && comp.boundary >= 3)
      report.lower_bound_half_units += 2 * (2 * static_cast<std::int64_t>(comp.interior) + 1);
    else
      report.lower_bound_half_units += 2 * static_cast<std::int64_t>(comp.triangles);
  }

  if (report.live_count == 0) {
    report.verdict = AuditVerdict::AllDead;
    return report;
  }
  if (auto face = audit_triangle_floor(g)) {
    report.verdict = AuditVerdict::TriangleFloorViolation;
    report.violation_face = face;
    report.detail = "active triangle " + std::to_string(*face) + " carries " +
                    std::to_string(report.face_half_units[*face]) + " half-units";
    return report;
  }
  if (auto vertex = audit_vertex_cap(g)) {
    report.verdict = AuditVerdict::VertexCapViolation;
    report.violation_vertex = vertex;
    report.detail = "vertex " + std::to_string(*vertex) + " carries " +
                    std::to_string(report.vertex_half_units[*vertex]) + " half-units";
    return report;
  }
  if (!report.identities_ok) {
    report.verdict = AuditVerdict::CountingContradiction;
    report.detail = "a decomposition counting identity failed";
    return report;
  }
  bool contradiction = false;
  for (const auto& comp : report.decomposition.components)
    if (!comp.closed && comp.boundary >= 3) {
      std::int64_t floor_half = 2 * (2 * static_cast<std::int64_t>(comp.interior) + 1);
      std::int64_t cap_half = 0;
      for (int v : comp.vertices) cap_half += report.live[v] ? 4 : 0;
      if (floor_half > cap_half) contradiction = true;
    }
  if (contradiction) {
    report.verdict = AuditVerdict::CountingContradiction;
    report.detail = "a component's inversion floor exceeds its live-vertex cap";
    return report;
  }
  report.verdict = AuditVerdict::Pass;
  return report;
}

}  // namespace riglab
