#include <doctest.h>

#include <cmath>

#include "support/helpers.hpp"
#include "support/rational_rref.hpp"

using namespace riglab;

namespace {

// Second route for kernel dimensions: exact elimination on an independently
// assembled constraint matrix.
int oracle_nullity(const SimplicialPolytope<Rational>& p, bool planted) {
  std::vector<std::array<mpq_class, 3>> verts(p.vertex_count());
  for (int i = 0; i < p.vertex_count(); ++i)
    for (int c = 0; c < 3; ++c) verts[i][c] = p.vertices(i, c);
  std::vector<std::pair<int, int>> edges;
  for (int e = 0; e < p.edge_count(); ++e) edges.emplace_back(p.edges(e, 0), p.edges(e, 1));
  std::vector<int> skip;
  if (planted) skip = {p.base(0), p.base(1), p.base(2)};
  const int cols = 3 * (p.vertex_count() - static_cast<int>(skip.size()));
  return oracle::nullity(oracle::constraint_rows(verts, edges, skip), cols);
}

SimplicialPolytope<Rational> exact_flat_octahedron() {
  return generate<Rational>(
      {.kind = PolytopeKind::FlatVertex, .host_kind = PolytopeKind::Octahedron, .face = 0}, testutil::config());
}

}  // namespace

TEST_CASE("rigidity matrix shape and row sparsity") {
  auto tet = testutil::tetrahedron();
  auto rm = rigidity_matrix(tet);
  CHECK(rm.row_count() == 6);
  CHECK(rm.col_count() == 12);

  auto oct = testutil::octahedron();
  auto rmo = rigidity_matrix(oct);
  CHECK(rmo.row_count() == 12);
  CHECK(rmo.col_count() == 18);
  for (int e = 0; e < rmo.row_count(); ++e) {
    int nonzero = 0;
    for (int c = 0; c < rmo.col_count(); ++c) nonzero += rmo.entries(e, c) != 0.0;
    CHECK(nonzero <= 6);
  }
}

TEST_CASE("dilation field on a unit-edge tetrahedron gives residual 1 on every edge") {
  auto tet = testutil::tetrahedron();
  SimplicialPolytope<double> unit =
      build_polytope<double>(MatrixX3<double>(tet.vertices / (2.0 * std::sqrt(2.0))), tet.faces,
                             tet.base, testutil::config());
  VelocityField<double> dilation = unit.vertices;  // a_i = v_i
  auto rm = rigidity_matrix(unit);
  VectorX<double> r = residuals(rm, dilation);
  for (int e = 0; e < r.size(); ++e) CHECK(r(e) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matrix route and direct route agree on residuals") {
  for (const auto& [name, p] : testutil::small_corpus()) {
    CAPTURE(name);
    auto rm = rigidity_matrix(p);
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto field = testutil::gaussian_field(p.vertex_count(), 100 + s);
      VectorX<double> via_matrix = residuals(rm, field);
      VectorX<double> direct = edge_residuals(p, field);
      CHECK((via_matrix - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("rigid-motion fields annihilate every edge constraint") {
  for (const auto& [name, p] : testutil::small_corpus()) {
    CAPTURE(name);
    auto rm = rigidity_matrix(p);
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto motion = testutil::gaussian_motion(1000 * s + 7);
      auto field = trivial_field(motion, p);
      const double magnitude =
          std::sqrt(motion.translation.squaredNorm() + motion.angular.squaredNorm());
      const double bound = 1e-12 * p.diameter * std::max(magnitude, 1.0);
      CHECK(residuals(rm, field).cwiseAbs().maxCoeff() <= bound);
    }
  }
}

TEST_CASE("pure translation projects equally onto both edge endpoints") {
  auto p = testutil::octahedron();
  TrivialMotion<double> tm;
  tm.translation << 0.3, -0.2, 0.9;
  auto field = trivial_field(tm, p);
  for (int e = 0; e < p.edge_count(); ++e) {
    Eigen::Vector3d d = (p.vertices.row(p.edges(e, 0)) - p.vertices.row(p.edges(e, 1))).transpose();
    CHECK(d.dot(field.row(p.edges(e, 0))) == doctest::Approx(d.dot(field.row(p.edges(e, 1)))));
  }
}

TEST_CASE("kernel dimensions match the exact elimination oracle") {
  ToleranceConfig cfg = testutil::config();

  auto qtet = generate<Rational>({.kind = PolytopeKind::Tetrahedron}, cfg);
  CHECK(oracle_nullity(qtet, false) == 6);
  CHECK(oracle_nullity(qtet, true) == 0);
  auto tet = testutil::tetrahedron();
  CHECK(kernel(rigidity_matrix(tet), cfg).dimension == 6);
  CHECK(kernel(plant(rigidity_matrix(tet), tet.base), cfg).dimension == 0);
  CHECK(kernel(rigidity_matrix(qtet), cfg).dimension == 6);

  auto qoct = generate<Rational>({.kind = PolytopeKind::Octahedron}, cfg);
  CHECK(oracle_nullity(qoct, false) == 6);  // rank 12 = 3*6 - 6
  CHECK(oracle_nullity(qoct, true) == 0);
  auto oct = testutil::octahedron();
  CHECK(kernel(rigidity_matrix(oct), cfg).dimension == 6);
  CHECK(kernel(plant(rigidity_matrix(oct), oct.base), cfg).dimension == 0);
  CHECK(kernel(rigidity_matrix(qoct), cfg).dimension == 6);
  CHECK(kernel(plant(rigidity_matrix(qoct), qoct.base), cfg).dimension == 0);

  auto qflat = exact_flat_octahedron();
  Eigen::Vector3i base(1, 3, 5);  // a face avoiding the flat vertex
  CHECK(oracle_nullity(qflat, false) == 7);
  CHECK(kernel(rigidity_matrix(qflat), cfg).dimension == 7);
  CHECK(kernel(plant(rigidity_matrix(qflat), base), cfg).dimension == 1);
  {
    std::vector<std::array<mpq_class, 3>> verts(qflat.vertex_count());
    for (int i = 0; i < qflat.vertex_count(); ++i)
      for (int c = 0; c < 3; ++c) verts[i][c] = qflat.vertices(i, c);
    std::vector<std::pair<int, int>> edges;
    for (int e = 0; e < qflat.edge_count(); ++e) edges.emplace_back(qflat.edges(e, 0), qflat.edges(e, 1));
    CHECK(oracle::nullity(oracle::constraint_rows(verts, edges, {1, 3, 5}), 3 * 4) == 1);
  }

  auto flat = testutil::flat_octahedron();
  CHECK(kernel(rigidity_matrix(flat), cfg).dimension == 7);
  CHECK(kernel(plant(rigidity_matrix(flat), base), cfg).dimension == 1);
}

TEST_CASE("exact rigid-motion fields have identically zero residuals") {
  auto qoct = generate<Rational>({.kind = PolytopeKind::Octahedron}, testutil::config());
  TrivialMotion<Rational> tm;
  tm.translation << Rational(1, 3), Rational(-2), Rational(7, 5);
  tm.angular << Rational(2), Rational(1, 7), Rational(-3, 4);
  VectorX<Rational> r = residuals(rigidity_matrix(qoct), trivial_field(tm, qoct));
  for (int e = 0; e < r.size(); ++e) CHECK(r(e) == Rational(0));
}

TEST_CASE("exact kernel basis fields satisfy the constraints identically") {
  auto qoct = generate<Rational>({.kind = PolytopeKind::Octahedron}, testutil::config());
  auto rm = rigidity_matrix(qoct);
  auto mb = kernel(rm, testutil::config());
  REQUIRE(mb.dimension == 6);
  for (const auto& b : mb.basis) {
    VectorX<Rational> r = residuals(rm, b);
    for (int e = 0; e < r.size(); ++e) CHECK(r(e) == Rational(0));
  }
}

TEST_CASE("strictly convex corpus is infinitesimally rigid") {
  for (const auto& [name, p] : testutil::small_corpus()) {
    CAPTURE(name);
    auto verdict = is_infinitesimally_rigid(p, p.base, testutil::config());
    CHECK(verdict.rigid);
    CHECK(verdict.full.dimension == 6);
    CHECK(verdict.planted.dimension == 0);
    CHECK_FALSE(verdict.witness.has_value());
  }
  auto big = testutil::random_sphere(50, 2);
  auto verdict = is_infinitesimally_rigid(big, big.base, testutil::config());
  CHECK(verdict.rigid);
  CHECK(big.edge_count() == 3 * 50 - 6);
}

TEST_CASE("the flat-vertex octahedron is flexible with a witness at the flat vertex") {
  auto flat = testutil::flat_octahedron();
  Eigen::Vector3i base(1, 3, 5);
  auto verdict = is_infinitesimally_rigid(flat, base, testutil::config());
  CHECK_FALSE(verdict.rigid);
  CHECK(verdict.full.dimension == 7);
  CHECK(verdict.planted.dimension == 1);
  REQUIRE(verdict.witness.has_value());
  const auto& w = *verdict.witness;
  CHECK(stack_field(w).norm() == doctest::Approx(1.0));
  for (int k = 0; k < 3; ++k) CHECK(w.row(base(k)).norm() == 0.0);
  CHECK(w.row(6).norm() > 0.99);  // supported on the flat vertex
  CHECK(edge_residuals(flat, w).cwiseAbs().maxCoeff() <= 1e-12);

  // Analytic witness: the face normal at the flat vertex, zero elsewhere.
  VelocityField<double> analytic = VelocityField<double>::Zero(7, 3);
  analytic.row(6) = Eigen::RowVector3d(1, 1, 1) / std::sqrt(3.0);
  CHECK(edge_residuals(flat, analytic).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("planting removes exactly the base columns") {
  auto p = testutil::icosahedron();
  auto rm = rigidity_matrix(p);
  auto planted = plant(rm, p.base);
  CHECK(planted.col_count() == rm.col_count() - 9);
  CHECK(planted.row_count() == rm.row_count());
  CHECK_THROWS_AS(plant(rm, Eigen::Vector3i(0, 0, 1)), Error);
}

TEST_CASE("no nonzero rigid motion vanishes on a base triangle") {
  // The 9 x 6 system mapping (t, w) to the field on the three base vertices
  // has full rank, so planting kills the whole trivial space.
  for (const auto& [name, p] : testutil::small_corpus()) {
    CAPTURE(name);
    Eigen::MatrixXd system(9, 6);
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d v = p.vertex(p.base(k));
      system.block<3, 3>(3 * k, 0).setIdentity();
      Eigen::Matrix3d cross;
      cross << 0, v.z(), -v.y(),
               -v.z(), 0, v.x(),
               v.y(), -v.x(), 0;
      system.block<3, 3>(3 * k, 3) = cross;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system);
    CHECK(svd.singularValues()(5) > 1e-6);
  }
}

TEST_CASE("kernel basis fields have small residuals and are orthonormal") {
  for (const auto& [name, p] : testutil::small_corpus()) {
    CAPTURE(name);
    auto rm = rigidity_matrix(p);
    auto mb = kernel(rm, testutil::config());
    const double matrix_norm = rm.entries.norm();
    for (std::size_t a = 0; a < mb.basis.size(); ++a) {
      CHECK(residuals(rm, mb.basis[a]).norm() <= testutil::config().eps_rank * matrix_norm);
      for (std::size_t b = 0; b <= a; ++b) {
        const double dot = stack_field(mb.basis[a]).dot(stack_field(mb.basis[b]));
        CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("an ambiguous singular spectrum is reported, not resolved") {
  RigidityMatrix<double> rm;
  rm.entries = Eigen::MatrixXd::Zero(2, 6);
  rm.entries(0, 0) = 1.0;
  rm.entries(1, 1) = 5e-8;  // within a decade of the 1e-8 cutoff
  rm.edges.resize(2, 2);
  rm.edges << 0, 1, 0, 1;
  rm.total_vertices = 2;
  rm.vertex_ids = {0, 1};
  try {
    kernel(rm, testutil::config());
    FAIL("expected NumericalBreakdown");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NumericalBreakdown);
  }
}

TEST_CASE("residual dimension mismatch is rejected") {
  auto p = testutil::tetrahedron();
  auto rm = rigidity_matrix(p);
  VelocityField<double> wrong = VelocityField<double>::Zero(5, 3);
  CHECK_THROWS_AS(residuals(rm, wrong), Error);
  CHECK_THROWS_AS(edge_residuals(p, wrong), Error);
}

TEST_CASE("finite differences recover the squared-length derivative") {
  auto p = testutil::octahedron();
  auto rm = rigidity_matrix(p);

  // Rigid motions: derivative estimates vanish to O(h^2).
  auto motion = testutil::gaussian_motion(5);
  auto tf = trivial_field(motion, p);
  CHECK(edge_length_sq_derivative_fd(p, tf, 1e-3).cwiseAbs().maxCoeff() < 1e-5);

  // Dilation on the unit-edge tetrahedron: estimates are 2 * residual = 2.
  auto tet = testutil::tetrahedron();
  SimplicialPolytope<double> unit =
      build_polytope<double>(MatrixX3<double>(tet.vertices / (2.0 * std::sqrt(2.0))), tet.faces,
                             tet.base, testutil::config());
  Eigen::VectorXd est = edge_length_sq_derivative_fd(unit, VelocityField<double>(unit.vertices), 1e-4);
  for (int e = 0; e < est.size(); ++e) CHECK(est(e) == doctest::Approx(2.0).epsilon(1e-7));

  // Halving the step shrinks the error about fourfold.
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto field = testutil::gaussian_field(p.vertex_count(), 300 + s);
    Eigen::VectorXd truth = 2.0 * residuals(rm, field);
    const double h = 1e-3;
    double e1 = (edge_length_sq_derivative_fd(p, field, h) - truth).cwiseAbs().sum();
    double e2 = (edge_length_sq_derivative_fd(p, field, h / 2) - truth).cwiseAbs().sum();
    REQUIRE(e2 > 0.0);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
  }
  CHECK_THROWS_AS(edge_length_sq_derivative_fd(p, testutil::gaussian_field(6, 1), 0.0), Error);
}
