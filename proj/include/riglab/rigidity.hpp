#pragma once

#include <Eigen/SVD>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "riglab/core.hpp"
#include "riglab/polytope.hpp"

namespace riglab {

/// One row per edge, three columns per carried vertex. For edge (i, j) the
/// block of i holds v_i - v_j and the block of j holds v_j - v_i, so a row
/// applied to a stacked field gives (v_i - v_j, a_i - a_j).
template <typename Scalar>
struct RigidityMatrix {
  MatrixX<Scalar> entries;       // |E| x 3k
  MatrixX2i edges;               // global vertex ids per row
  std::vector<int> vertex_ids;   // column block -> global vertex id
  int total_vertices = 0;

  int row_count() const { return static_cast<int>(entries.rows()); }
  int col_count() const { return static_cast<int>(entries.cols()); }
};

template <typename Scalar>
struct MotionBasis {
  int dimension = 0;
  std::vector<VelocityField<Scalar>> basis;  // one row per carried vertex
  std::vector<int> vertex_ids;
  int total_vertices = 0;
  std::optional<double> singular_value_gap;  // floating mode only
};

template <typename Scalar>
struct TrivialMotion {
  Vector3<Scalar> translation = Vector3<Scalar>::Zero();
  Vector3<Scalar> angular = Vector3<Scalar>::Zero();
};

template <typename Scalar>
RigidityMatrix<Scalar> rigidity_matrix(const SimplicialPolytope<Scalar>& p) {
  const int m = p.edge_count();
  const int n = p.vertex_count();
  RigidityMatrix<Scalar> rm;
  rm.entries = MatrixX<Scalar>::Zero(m, 3 * n);
  rm.edges = p.edges;
  rm.total_vertices = n;
  rm.vertex_ids.resize(n);
  std::iota(rm.vertex_ids.begin(), rm.vertex_ids.end(), 0);
  for (int e = 0; e < m; ++e) {
    const int i = p.edges(e, 0), j = p.edges(e, 1);
    RowVector3<Scalar> d = p.vertices.row(i) - p.vertices.row(j);
    rm.entries.template block<1, 3>(e, 3 * i) = d;
    rm.entries.template block<1, 3>(e, 3 * j) = -d;
  }
  return rm;
}

template <typename Scalar>
VectorX<Scalar> stack_field(const VelocityField<Scalar>& field) {
  VectorX<Scalar> x(3 * field.rows());
  for (int i = 0; i < field.rows(); ++i)
    for (int c = 0; c < 3; ++c) x(3 * i + c) = field(i, c);
  return x;
}

template <typename Scalar>
VelocityField<Scalar> unstack_field(const VectorX<Scalar>& x) {
  VelocityField<Scalar> field(x.size() / 3, 3);
  for (int i = 0; i < field.rows(); ++i)
    for (int c = 0; c < 3; ++c) field(i, c) = x(3 * i + c);
  return field;
}

/// Per-edge constraint values (v_i - v_j, a_i - a_j). The field must carry
/// exactly the vertices of the matrix, in matrix order.
template <typename Scalar>
VectorX<Scalar> residuals(const RigidityMatrix<Scalar>& rm, const VelocityField<Scalar>& field) {
  if (3 * field.rows() != rm.col_count())
    throw Error(ErrorCode::DimensionMismatch, "field carries " + std::to_string(field.rows()) +
                                                  " vertices, matrix expects " + std::to_string(rm.col_count() / 3));
  return rm.entries * stack_field(field);
}

/// Same values computed straight from the polytope, bypassing the matrix.
template <typename Scalar>
VectorX<Scalar> edge_residuals(const SimplicialPolytope<Scalar>& p, const VelocityField<Scalar>& field) {
  if (field.rows() != p.vertex_count())
    throw Error(ErrorCode::DimensionMismatch, "field size does not match vertex count");
  VectorX<Scalar> r(p.edge_count());
  for (int e = 0; e < p.edge_count(); ++e) {
    const int i = p.edges(e, 0), j = p.edges(e, 1);
    RowVector3<Scalar> d = p.vertices.row(i) - p.vertices.row(j);
    r(e) = d.dot(field.row(i) - field.row(j));
  }
  return r;
}

/// Removes the three column blocks of the base vertices; the kernel of the
/// result is the planted motion space restricted to the free vertices.
template <typename Scalar>
RigidityMatrix<Scalar> plant(const RigidityMatrix<Scalar>& rm, const Eigen::Vector3i& base) {
  if (base(0) == base(1) || base(1) == base(2) || base(0) == base(2))
    throw Error(ErrorCode::BadParameter, "base vertices must be distinct");
  std::vector<char> is_base(rm.total_vertices, 0);
  for (int k = 0; k < 3; ++k) {
    if (base(k) < 0 || base(k) >= rm.total_vertices)
      throw Error(ErrorCode::BadParameter, "base vertex out of range");
    is_base[base(k)] = 1;
  }
  RigidityMatrix<Scalar> out;
  out.edges = rm.edges;
  out.total_vertices = rm.total_vertices;
  for (std::size_t b = 0; b < rm.vertex_ids.size(); ++b)
    if (!is_base[rm.vertex_ids[b]]) out.vertex_ids.push_back(rm.vertex_ids[b]);
  out.entries.resize(rm.row_count(), 3 * static_cast<int>(out.vertex_ids.size()));
  int col = 0;
  for (std::size_t b = 0; b < rm.vertex_ids.size(); ++b) {
    if (is_base[rm.vertex_ids[b]]) continue;
    out.entries.middleCols(col, 3) = rm.entries.middleCols(3 * static_cast<int>(b), 3);
    col += 3;
  }
  return out;
}

/// Kernel of the rigidity matrix. Floating mode thresholds singular values
/// at eps_rank * sigma_max and refuses to decide an ambiguous rank; exact
/// mode computes the nullity over the rationals.
template <typename Scalar>
MotionBasis<Scalar> kernel(const RigidityMatrix<Scalar>& rm, const ToleranceConfig& config) {
  MotionBasis<Scalar> mb;
  mb.vertex_ids = rm.vertex_ids;
  mb.total_vertices = rm.total_vertices;
  const int cols = rm.col_count();
  if constexpr (is_floating_mode<Scalar>) {
    Eigen::BDCSVD<MatrixX<Scalar>> svd(rm.entries, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const int q = static_cast<int>(sigma.size());
    const double sigma_max = q > 0 ? to_double(sigma(0)) : 0.0;
    if (sigma_max == 0.0) throw Error(ErrorCode::NumericalBreakdown, "zero rigidity matrix");
    const double cut = config.eps_rank * sigma_max;
    int rank = 0;
    while (rank < q && to_double(sigma(rank)) > cut) ++rank;
    const double smallest_kept = rank > 0 ? to_double(sigma(rank - 1)) : std::numeric_limits<double>::infinity();
    const double largest_cut = rank < q ? to_double(sigma(rank)) : 0.0;
    if (smallest_kept <= 10.0 * cut || largest_cut >= cut / 10.0)
      throw Error(ErrorCode::NumericalBreakdown,
                  "ambiguous rank: singular values " + std::to_string(smallest_kept) + " / " +
                      std::to_string(largest_cut) + " straddle the cutoff " + std::to_string(cut));
    mb.singular_value_gap =
        largest_cut > 0.0 ? smallest_kept / largest_cut : std::numeric_limits<double>::infinity();
    mb.dimension = cols - rank;
    for (int k = rank; k < cols; ++k) mb.basis.push_back(unstack_field<Scalar>(svd.matrixV().col(k)));
  } else {
    Eigen::FullPivLU<MatrixX<Scalar>> lu(rm.entries);
    lu.setThreshold(Scalar(0));
    mb.dimension = static_cast<int>(lu.dimensionOfKernel());
    if (mb.dimension > 0) {
      MatrixX<Scalar> null_space = lu.kernel();
      for (int k = 0; k < null_space.cols(); ++k)
        mb.basis.push_back(unstack_field<Scalar>(VectorX<Scalar>(null_space.col(k))));
    }
  }
  return mb;
}

/// Zero-pads a restricted field back to all vertices of the polytope.
template <typename Scalar>
VelocityField<Scalar> expand_field(const VelocityField<Scalar>& restricted, const std::vector<int>& vertex_ids,
                                   int total_vertices) {
  VelocityField<Scalar> full = VelocityField<Scalar>::Zero(total_vertices, 3);
  for (std::size_t b = 0; b < vertex_ids.size(); ++b) full.row(vertex_ids[b]) = restricted.row(static_cast<int>(b));
  return full;
}

template <typename Scalar>
struct RigidityAssessment {
  bool rigid = false;
  MotionBasis<Scalar> full;
  MotionBasis<Scalar> planted;
  std::optional<VelocityField<Scalar>> witness;  // full-size planted flex, unit scale
};

template <typename Scalar>
RigidityAssessment<Scalar> is_infinitesimally_rigid(const SimplicialPolytope<Scalar>& p, const Eigen::Vector3i& base,
                                                    const ToleranceConfig& config) {
  bool base_is_face = false;
  std::array<int, 3> want{base(0), base(1), base(2)};
  std::sort(want.begin(), want.end());
  for (int i = 0; i < p.face_count() && !base_is_face; ++i) {
    std::array<int, 3> have{p.faces(i, 0), p.faces(i, 1), p.faces(i, 2)};
    std::sort(have.begin(), have.end());
    base_is_face = have == want;
  }
  if (!base_is_face) throw Error(ErrorCode::BaseNotAFace, "base triple is not a face of the polytope");

  RigidityAssessment<Scalar> out;
  RigidityMatrix<Scalar> rm = rigidity_matrix(p);
  out.full = kernel(rm, config);
  out.planted = kernel(plant(rm, base), config);
  out.rigid = out.planted.dimension == 0;
  if (!out.rigid) {
    VelocityField<Scalar> w = expand_field(out.planted.basis.front(), out.planted.vertex_ids, p.vertex_count());
    if constexpr (is_floating_mode<Scalar>) {
      w /= std::sqrt(to_double(Scalar(stack_field(w).dot(stack_field(w)))));
    } else {
      Scalar largest(0);
      for (int i = 0; i < w.rows(); ++i)
        for (int c = 0; c < 3; ++c) {
          Scalar mag = w(i, c) < Scalar(0) ? Scalar(-w(i, c)) : w(i, c);
          if (mag > largest) largest = mag;
        }
      if (largest > Scalar(0)) w /= largest;
    }
    out.witness = w;
  }
  return out;
}

/// Field of the ambient rigid motion a_i = t + w x v_i.
template <typename Scalar>
VelocityField<Scalar> trivial_field(const TrivialMotion<Scalar>& motion, const SimplicialPolytope<Scalar>& p) {
  VelocityField<Scalar> field(p.vertex_count(), 3);
  for (int i = 0; i < p.vertex_count(); ++i) {
    Vector3<Scalar> v = p.vertex(i);
    field.row(i) = (motion.translation + motion.angular.cross(v)).transpose();
  }
  return field;
}

/// Finite-difference estimate of the squared-edge-length derivative along
/// the straight-line motion v + t a. Uses the chain-rule form
/// 2 * |e(0)| * central_difference(|e(t)|), which carries a genuine O(h^2)
/// term; the raw central difference of |e(t)|^2 is exact on quadratics and
/// cannot exhibit second-order convergence.
inline Eigen::VectorXd edge_length_sq_derivative_fd(const SimplicialPolytope<double>& p,
                                                    const VelocityField<double>& field, double h) {
  if (h <= 0) throw Error(ErrorCode::BadParameter, "step must be positive");
  if (field.rows() != p.vertex_count())
    throw Error(ErrorCode::DimensionMismatch, "field size does not match vertex count");
  Eigen::VectorXd est(p.edge_count());
  for (int e = 0; e < p.edge_count(); ++e) {
    const int i = p.edges(e, 0), j = p.edges(e, 1);
    Eigen::Vector3d d = (p.vertices.row(i) - p.vertices.row(j)).transpose();
    Eigen::Vector3d w = (field.row(i) - field.row(j)).transpose();
    const double plus = (d + h * w).norm();
    const double minus = (d - h * w).norm();
    est(e) = 2.0 * d.norm() * (plus - minus) / (2.0 * h);
  }
  return est;
}

}  // namespace riglab
