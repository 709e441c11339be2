#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "riglab/riglab.hpp"

namespace testutil {

using riglab::SimplicialPolytope;
using riglab::ToleranceConfig;
using riglab::VelocityField;

inline ToleranceConfig config() { return {}; }

inline SimplicialPolytope<double> tetrahedron() {
  return riglab::generate<double>({.kind = riglab::PolytopeKind::Tetrahedron}, config());
}

inline SimplicialPolytope<double> octahedron() {
  return riglab::generate<double>({.kind = riglab::PolytopeKind::Octahedron}, config());
}

inline SimplicialPolytope<double> icosahedron() {
  return riglab::generate<double>({.kind = riglab::PolytopeKind::Icosahedron}, config());
}

inline SimplicialPolytope<double> bipyramid(int k) {
  return riglab::generate<double>({.kind = riglab::PolytopeKind::Bipyramid, .size = k}, config());
}

inline SimplicialPolytope<double> random_sphere(int n, std::uint64_t seed) {
  return riglab::generate<double>({.kind = riglab::PolytopeKind::RandomSphere, .size = n, .seed = seed}, config());
}

inline SimplicialPolytope<double> flat_octahedron() {
  return riglab::generate<double>(
      {.kind = riglab::PolytopeKind::FlatVertex, .host_kind = riglab::PolytopeKind::Octahedron, .face = 0}, config());
}

struct NamedPolytope {
  std::string name;
  SimplicialPolytope<double> polytope;
};

inline std::vector<NamedPolytope> small_corpus() {
  std::vector<NamedPolytope> corpus;
  corpus.push_back({"tetrahedron", tetrahedron()});
  corpus.push_back({"octahedron", octahedron()});
  corpus.push_back({"icosahedron", icosahedron()});
  for (int k = 3; k <= 6; ++k) corpus.push_back({"bipyramid(" + std::to_string(k) + ")", bipyramid(k)});
  corpus.push_back({"random_sphere(12,3)", random_sphere(12, 3)});
  return corpus;
}

inline VelocityField<double> gaussian_field(int n, std::uint64_t seed) {
  riglab::detail::GaussianSource gauss(riglab::detail::mix_seed(seed, 17));
  VelocityField<double> field(n, 3);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) field(i, c) = gauss();
  return field;
}

inline riglab::TrivialMotion<double> gaussian_motion(std::uint64_t seed) {
  riglab::detail::GaussianSource gauss(riglab::detail::mix_seed(seed, 23));
  riglab::TrivialMotion<double> motion;
  for (int c = 0; c < 3; ++c) motion.translation(c) = gauss();
  for (int c = 0; c < 3; ++c) motion.angular(c) = gauss();
  return motion;
}

/// Random element of the kernel of the (full or planted) rigidity matrix,
/// expanded to a full-size field.
inline VelocityField<double> kernel_sample(const SimplicialPolytope<double>& p, const riglab::MotionBasis<double>& mb,
                                           std::uint64_t seed) {
  riglab::detail::GaussianSource gauss(riglab::detail::mix_seed(seed, 41));
  VelocityField<double> restricted = VelocityField<double>::Zero(static_cast<int>(mb.vertex_ids.size()), 3);
  for (const auto& b : mb.basis) restricted += gauss() * b;
  return riglab::expand_field(restricted, mb.vertex_ids, p.vertex_count());
}

}  // namespace testutil
