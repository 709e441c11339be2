#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace riglab {

template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using RowVector3 = Eigen::Matrix<Scalar, 1, 3>;
template <typename Scalar> using MatrixX3 = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;
template <typename Scalar> using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar> using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixX3i = Eigen::Matrix<int, Eigen::Dynamic, 3>;
using MatrixX2i = Eigen::Matrix<int, Eigen::Dynamic, 2>;

/// One velocity row per vertex.
template <typename Scalar> using VelocityField = MatrixX3<Scalar>;

/// Floating instantiations classify signs with relative tolerances;
/// exact (rational) instantiations compare against zero directly.
template <typename Scalar>
inline constexpr bool is_floating_mode = std::is_floating_point_v<Scalar>;

enum class ErrorCode {
  NonManifold,
  EulerViolation,
  NotConvex,
  DegenerateFace,
  NonPlanarFace,
  BadOrientation,
  BaseNotAFace,
  DegenerateInput,
  BadParameter,
  DimensionMismatch,
  NumericalBreakdown,
  IdentityViolation,
  ParseError,
};

inline const char* name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonManifold: return "NonManifold";
    case ErrorCode::EulerViolation: return "EulerViolation";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::NonPlanarFace: return "NonPlanarFace";
    case ErrorCode::BadOrientation: return "BadOrientation";
    case ErrorCode::BaseNotAFace: return "BaseNotAFace";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(name(code)) + ": " + message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Relative tolerances used by the floating-point mode. Exact mode ignores
/// them; every comparison there is against literal zero.
struct ToleranceConfig {
  double eps_sign = 1e-9;    // sign / zero classification of projections
  double eps_rank = 1e-8;    // singular value cutoff relative to sigma_max
  double eps_convex = 1e-9;  // convexity margin relative to diameter
};

template <typename Scalar>
int sign_of(const Scalar& x) {
  return x > Scalar(0) ? 1 : (x < Scalar(0) ? -1 : 0);
}

inline double to_double(double x) { return x; }

}  // namespace riglab
