#pragma once

#include <json.hpp>

#include <sstream>
#include <string>

#include "riglab/audit.hpp"
#include "riglab/core.hpp"
#include "riglab/exact.hpp"
#include "riglab/orientation.hpp"
#include "riglab/rigidity.hpp"

namespace riglab {

using nlohmann::json;

inline json field_to_json(const VelocityField<double>& field) {
  json rows = json::array();
  for (int i = 0; i < field.rows(); ++i) rows.push_back({field(i, 0), field(i, 1), field(i, 2)});
  return json{{"n", field.rows()}, {"a", rows}};
}

/// Reads {"n": ..., "a": [[x, y, z], ...]}. Exact mode additionally accepts
/// string entries ("1/3", "-0.25"), taken as exact rationals.
template <typename Scalar>
VelocityField<Scalar> field_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("a"))
    throw Error(ErrorCode::ParseError, "velocity field JSON must have fields 'n' and 'a'");
  const auto& rows = j.at("a");
  if (!rows.is_array() || !j.at("n").is_number_integer() || j.at("n").get<long>() != static_cast<long>(rows.size()))
    throw Error(ErrorCode::ParseError, "velocity field length disagrees with 'n'");
  VelocityField<Scalar> field(static_cast<int>(rows.size()), 3);
  for (int i = 0; i < field.rows(); ++i) {
    const auto& row = rows.at(i);
    if (!row.is_array() || row.size() != 3)
      throw Error(ErrorCode::ParseError, "velocity row " + std::to_string(i) + " is not a 3-vector");
    for (int c = 0; c < 3; ++c) {
      const auto& cell = row.at(c);
      if constexpr (is_floating_mode<Scalar>) {
        if (!cell.is_number()) throw Error(ErrorCode::ParseError, "velocity entries must be numbers");
        field(i, c) = cell.get<double>();
      } else {
        if (cell.is_string())
          field(i, c) = rational_from_text(cell.get<std::string>());
        else if (cell.is_number())
          field(i, c) = Rational(cell.get<double>());
        else
          throw Error(ErrorCode::ParseError, "velocity entries must be numbers or rational strings");
      }
    }
  }
  return field;
}

template <typename Scalar>
VelocityField<double> field_to_doubles(const VelocityField<Scalar>& field) {
  VelocityField<double> out(field.rows(), 3);
  for (int i = 0; i < field.rows(); ++i)
    for (int c = 0; c < 3; ++c) out(i, c) = to_double(Scalar(field(i, c)));
  return out;
}

/// One velocity-field JSON object per basis vector, zero-padded to all
/// vertices of the polytope.
template <typename Scalar>
json motion_basis_to_json(const MotionBasis<Scalar>& mb) {
  json fields = json::array();
  for (const auto& b : mb.basis)
    fields.push_back(field_to_json(field_to_doubles<Scalar>(expand_field(b, mb.vertex_ids, mb.total_vertices))));
  json j{{"schema", 1}, {"dimension", mb.dimension}, {"basis", fields}};
  if (mb.singular_value_gap)
    j["singular_value_gap"] =
        std::isinf(*mb.singular_value_gap) ? json("inf") : json(*mb.singular_value_gap);
  return j;
}

inline json component_to_json(const ComponentStats& comp) {
  return json{{"vertices", comp.vertices.size()},
              {"edges", comp.edge_ids.size()},
              {"interior", comp.interior},
              {"boundary", comp.boundary},
              {"boundary_loops", comp.boundary_loops},
              {"boundary_edges", comp.boundary_edges},
              {"triangles", comp.triangles},
              {"closed", comp.closed},
              {"edge_identity_ok", comp.edge_identity_ok},
              {"triangle_identity_ok", comp.triangle_identity_ok}};
}

inline json audit_report_to_json(const AuditReport& report) {
  json j{{"schema", 1},
         {"verdict", name(report.verdict)},
         {"admissible", report.admissible},
         {"planted", report.planted},
         {"live_count", report.live_count},
         {"total_half_units", report.total_half_units},
         {"vertex_half_units", report.vertex_half_units},
         {"face_half_units", report.face_half_units},
         {"live", json::array()},
         {"bounds",
          {{"lower_half_units", report.lower_bound_half_units}, {"upper_half_units", report.upper_bound_half_units}}},
         {"identities_ok", report.identities_ok},
         {"components", json::array()}};
  for (char flag : report.live) j["live"].push_back(static_cast<bool>(flag));
  for (const auto& comp : report.decomposition.components) j["components"].push_back(component_to_json(comp));
  if (!report.detail.empty()) j["detail"] = report.detail;
  if (report.mixed)
    j["mixed_signs"] = {{"edge", report.mixed->edge},
                        {"i", report.mixed->i},
                        {"j", report.mixed->j},
                        {"proj_i", report.mixed->proj_i},
                        {"proj_j", report.mixed->proj_j}};
  if (report.violation_face) j["violation_face"] = *report.violation_face;
  if (report.violation_vertex) j["violation_vertex"] = *report.violation_vertex;
  return j;
}

/// DOT export: unoriented edges drawn undirected, oriented edges as arcs,
/// dead vertices filled, live vertices hollow.
inline std::string dot_export(const OrientationGraph& g) {
  std::ostringstream out;
  out << "digraph orientation {\n  node [shape=circle];\n";
  for (int v = 0; v < g.n; ++v) {
    out << "  v" << v;
    if (g.live(v))
      out << " [style=solid];\n";
    else
      out << " [style=filled, fillcolor=gray];\n";
  }
  for (int e = 0; e < g.edges.rows(); ++e) {
    const int i = g.edges(e, 0), j = g.edges(e, 1);
    switch (g.edge_classes[e].orientation) {
      case EdgeOrientation::Unoriented:
        out << "  v" << i << " -> v" << j << " [dir=none];\n";
        break;
      case EdgeOrientation::Forward:
        out << "  v" << i << " -> v" << j << ";\n";
        break;
      case EdgeOrientation::Backward:
        out << "  v" << j << " -> v" << i << ";\n";
        break;
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace riglab
