#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "riglab/core.hpp"
#include "riglab/hull.hpp"
#include "riglab/polytope.hpp"

namespace riglab {

enum class PolytopeKind { Tetrahedron, Octahedron, Icosahedron, Bipyramid, RandomSphere, FlatVertex };

struct GenerateSpec {
  PolytopeKind kind = PolytopeKind::Tetrahedron;
  int size = 0;            // bipyramid ring size / random_sphere point count
  std::uint64_t seed = 0;  // random_sphere
  PolytopeKind host_kind = PolytopeKind::Octahedron;  // flat_vertex host
  int host_size = 0;
  int face = 0;  // flat_vertex host face to split
};

inline PolytopeKind kind_from_name(const std::string& s) {
  if (s == "tetrahedron") return PolytopeKind::Tetrahedron;
  if (s == "octahedron") return PolytopeKind::Octahedron;
  if (s == "icosahedron") return PolytopeKind::Icosahedron;
  if (s == "bipyramid") return PolytopeKind::Bipyramid;
  if (s == "random_sphere") return PolytopeKind::RandomSphere;
  if (s == "flat_vertex") return PolytopeKind::FlatVertex;
  throw Error(ErrorCode::BadParameter, "unknown polytope kind '" + s + "'");
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step over (seed, stream)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_ = true;
    return r * std::cos(theta);
  }

 private:
  double uniform() { return static_cast<double>(rng_()) * 0x1.0p-64; }
  std::mt19937_64 rng_;
  bool have_ = false;
  double spare_ = 0.0;
};

template <typename Scalar>
SimplicialPolytope<Scalar> canonical_tetrahedron(const ToleranceConfig& config) {
  MatrixX3<Scalar> v(4, 3);
  v << Scalar(1), Scalar(1), Scalar(1),
       Scalar(1), Scalar(-1), Scalar(-1),
       Scalar(-1), Scalar(1), Scalar(-1),
       Scalar(-1), Scalar(-1), Scalar(1);
  MatrixX3i f(4, 3);
  f << 0, 1, 2,
       0, 2, 3,
       0, 3, 1,
       1, 3, 2;
  return build_polytope<Scalar>(v, f, config, /*strict=*/true);
}

template <typename Scalar>
SimplicialPolytope<Scalar> canonical_octahedron(const ToleranceConfig& config) {
  MatrixX3<Scalar> v(6, 3);
  v << Scalar(1), Scalar(0), Scalar(0),
       Scalar(-1), Scalar(0), Scalar(0),
       Scalar(0), Scalar(1), Scalar(0),
       Scalar(0), Scalar(-1), Scalar(0),
       Scalar(0), Scalar(0), Scalar(1),
       Scalar(0), Scalar(0), Scalar(-1);
  MatrixX3i f(8, 3);
  f << 0, 2, 4,
       2, 1, 4,
       1, 3, 4,
       3, 0, 4,
       2, 0, 5,
       1, 2, 5,
       3, 1, 5,
       0, 3, 5;
  return build_polytope<Scalar>(v, f, config, /*strict=*/true);
}

inline SimplicialPolytope<double> icosahedron(const ToleranceConfig& config) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  MatrixX3<double> v(12, 3);
  int r = 0;
  for (double sy : {1.0, -1.0})
    for (double sz : {1.0, -1.0}) v.row(r++) << 0.0, sy, sz * phi;
  for (double sx : {1.0, -1.0})
    for (double sy : {1.0, -1.0}) v.row(r++) << sx, sy * phi, 0.0;
  for (double sx : {1.0, -1.0})
    for (double sz : {1.0, -1.0}) v.row(r++) << sx * phi, 0.0, sz;
  return convex_hull<double>(v, config);
}

inline SimplicialPolytope<double> bipyramid(int k, const ToleranceConfig& config) {
  if (k < 3) throw Error(ErrorCode::BadParameter, "bipyramid needs ring size >= 3");
  MatrixX3<double> v(k + 2, 3);
  for (int i = 0; i < k; ++i) {
    double theta = 2.0 * std::numbers::pi * i / k;
    v.row(i) << std::cos(theta), std::sin(theta), 0.0;
  }
  v.row(k) << 0.0, 0.0, 1.0;
  v.row(k + 1) << 0.0, 0.0, -1.0;
  MatrixX3i f(2 * k, 3);
  for (int i = 0; i < k; ++i) {
    f.row(i) << i, (i + 1) % k, k;
    f.row(k + i) << (i + 1) % k, i, k + 1;
  }
  return build_polytope<double>(v, f, config, /*strict=*/true);
}

inline SimplicialPolytope<double> random_sphere(int n, std::uint64_t seed, const ToleranceConfig& config) {
  if (n < 4) throw Error(ErrorCode::BadParameter, "random_sphere needs at least 4 points");
  GaussianSource gauss(mix_seed(seed, 0));
  MatrixX3<double> pts(n, 3);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d p;
    do {
      p << gauss(), gauss(), gauss();
    } while (p.norm() < 1e-6);
    pts.row(i) = p.normalized().transpose();
  }
  SimplicialPolytope<double> hull = convex_hull<double>(pts, config);
  if (hull.vertex_count() != n)
    throw Error(ErrorCode::DegenerateInput, "random sphere sample produced a degenerate hull");
  return hull;
}

}  // namespace detail

/// Deterministic instance generators. flat_vertex splits a host face at its
/// centroid into three coplanar triangles, so the result is valid but not
/// strictly convex.
template <typename Scalar>
SimplicialPolytope<Scalar> generate(const GenerateSpec& spec, const ToleranceConfig& config) {
  switch (spec.kind) {
    case PolytopeKind::Tetrahedron:
      return detail::canonical_tetrahedron<Scalar>(config);
    case PolytopeKind::Octahedron:
      return detail::canonical_octahedron<Scalar>(config);
    case PolytopeKind::Icosahedron:
      if constexpr (is_floating_mode<Scalar>)
        return detail::icosahedron(config);
      else
        throw Error(ErrorCode::BadParameter, "icosahedron has irrational coordinates; no exact generator");
    case PolytopeKind::Bipyramid:
      if constexpr (is_floating_mode<Scalar>)
        return detail::bipyramid(spec.size, config);
      else
        throw Error(ErrorCode::BadParameter, "bipyramid has irrational coordinates; no exact generator");
    case PolytopeKind::RandomSphere:
      if constexpr (is_floating_mode<Scalar>)
        return detail::random_sphere(spec.size, spec.seed, config);
      else
        throw Error(ErrorCode::BadParameter, "random_sphere is floating-point only");
    case PolytopeKind::FlatVertex: {
      if (spec.host_kind == PolytopeKind::FlatVertex || spec.host_kind == PolytopeKind::RandomSphere)
        throw Error(ErrorCode::BadParameter, "unsupported flat_vertex host kind");
      GenerateSpec host = spec;
      host.kind = spec.host_kind;
      host.size = spec.host_size;
      SimplicialPolytope<Scalar> base = generate<Scalar>(host, config);
      if (spec.face < 0 || spec.face >= base.face_count())
        throw Error(ErrorCode::BadParameter, "flat_vertex face index out of range");
      const int n = base.vertex_count();
      const int a = base.faces(spec.face, 0), b = base.faces(spec.face, 1), c = base.faces(spec.face, 2);
      MatrixX3<Scalar> v(n + 1, 3);
      v.topRows(n) = base.vertices;
      v.row(n) = (base.vertices.row(a) + base.vertices.row(b) + base.vertices.row(c)) / Scalar(3);
      MatrixX3i f(base.face_count() + 2, 3);
      f.topRows(base.face_count()) = base.faces;
      f.row(spec.face) << a, b, n;
      f.row(base.face_count()) << b, c, n;
      f.row(base.face_count() + 1) << c, a, n;
      return build_polytope<Scalar>(v, f, config, /*strict=*/false);
    }
  }
  throw Error(ErrorCode::BadParameter, "unknown polytope kind");
}

}  // namespace riglab
