#include <doctest.h>

#include <sstream>

#include "support/helpers.hpp"

using namespace riglab;

namespace {

std::string to_off(const SimplicialPolytope<double>& p) {
  std::ostringstream out;
  write_off(out, p);
  return out.str();
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++count;
  return count;
}

}  // namespace

TEST_CASE("OFF round trip preserves the mesh bit for bit") {
  auto p = testutil::random_sphere(25, 4);
  std::string first = to_off(p);
  std::istringstream in(first);
  auto gp = read_off<double>(in);
  auto q = triangulate_faces(gp, testutil::config());
  CHECK(q.vertices == p.vertices);
  CHECK(q.faces == p.faces);
  CHECK(to_off(q) == first);
}

TEST_CASE("reader accepts polygons, comments and blank lines") {
  std::istringstream in(
      "# a cube\n"
      "OFF\n"
      "\n"
      "8 6 12\n"
      "-1 -1 -1\n 1 -1 -1\n 1 1 -1\n -1 1 -1\n"
      "-1 -1 1\n 1 -1 1\n 1 1 1\n -1 1 1\n"
      "4 0 3 2 1\n4 4 5 6 7   # top\n4 0 1 5 4\n4 1 2 6 5\n4 2 3 7 6\n4 3 0 4 7\n");
  auto gp = read_off<double>(in);
  CHECK(gp.faces.size() == 6);
  auto p = triangulate_faces(gp, testutil::config());
  CHECK(p.face_count() == 12);
}

TEST_CASE("malformed OFF files raise ParseError") {
  auto expect_parse_error = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_off<double>(in);
      FAIL("expected ParseError for: " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  };
  expect_parse_error("");
  expect_parse_error("PLY\n3 1 3\n");
  expect_parse_error("OFF\n-1 2 3\n");
  expect_parse_error("OFF\n3 1 3\n0 0 0\n1 0 0\n");                       // truncated
  expect_parse_error("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");      // index range
  expect_parse_error("OFF\n3 1 3\n0 0 zebra\n1 0 0\n0 1 0\n3 0 1 2\n");  // bad number
}

TEST_CASE("exact reader parses decimals exactly") {
  std::istringstream in(
      "OFF\n4 4 6\n"
      "0.1 0 0\n0 1e-2 0\n0 0 -2.5\n1 1 1\n"
      "3 0 1 2\n3 0 2 3\n3 0 3 1\n3 1 3 2\n");
  auto gp = read_off<Rational>(in);
  CHECK(gp.vertices(0, 0) == Rational(1, 10));
  CHECK(gp.vertices(1, 1) == Rational(1, 100));
  CHECK(gp.vertices(2, 2) == Rational(-5, 2));
}

TEST_CASE("rational literal parsing") {
  CHECK(rational_from_text("1/3") == Rational(1, 3));
  CHECK(rational_from_text("-0.125") == Rational(-1, 8));
  CHECK(rational_from_text("2.5e3") == Rational(2500));
  CHECK(rational_from_text("1e-3") == Rational(1, 1000));
  CHECK(rational_from_text("-7") == Rational(-7));
  CHECK_THROWS_AS(rational_from_text("zebra"), Error);
  CHECK_THROWS_AS(rational_from_text("1..2"), Error);
  CHECK_THROWS_AS(rational_from_text(""), Error);
}

TEST_CASE("velocity field JSON round trip") {
  auto field = testutil::gaussian_field(5, 77);
  json j = field_to_json(field);
  CHECK(j.at("n") == 5);
  auto back = field_from_json<double>(j);
  CHECK(back == field);

  json bad = {{"n", 4}, {"a", j.at("a")}};
  CHECK_THROWS_AS(field_from_json<double>(bad), Error);
}

TEST_CASE("exact velocity fields accept rational strings") {
  json j = {{"n", 2}, {"a", {{"1/3", "0", "-2"}, {0.5, 1, 0}}}};
  auto field = field_from_json<Rational>(j);
  CHECK(field(0, 0) == Rational(1, 3));
  CHECK(field(1, 0) == Rational(1, 2));
}

TEST_CASE("audit report JSON carries the schema version and counts") {
  auto p = testutil::octahedron();
  TrivialMotion<double> tm;
  tm.translation << 0, 0, 1;
  auto report = global_audit(p, trivial_field(tm, p), p.base, testutil::config());
  json j = audit_report_to_json(report);
  CHECK(j.at("schema") == 1);
  CHECK(j.at("verdict") == "pass");
  CHECK(j.at("total_half_units") == 16);
  CHECK(j.at("vertex_half_units").size() == 6);
  CHECK(j.at("face_half_units").size() == 8);
  CHECK(j.at("components").size() == 1);
  CHECK(j.at("components")[0].at("closed") == true);
}

TEST_CASE("DOT export draws arcs, undirected edges and vertex fill") {
  auto p = testutil::octahedron();
  TrivialMotion<double> tm;
  tm.translation << 0, 0, 1;
  auto g = classify_edges(p, trivial_field(tm, p), testutil::config()).graph.value();
  std::string dot = dot_export(g);
  CHECK(count_occurrences(dot, "dir=none") == 4);
  CHECK(count_occurrences(dot, "->") == 12);  // 8 arcs + 4 undirected
  CHECK(count_occurrences(dot, "style=filled") == 0);

  VelocityField<double> zero = VelocityField<double>::Zero(6, 3);
  auto gz = classify_edges(p, zero, testutil::config()).graph.value();
  std::string dotz = dot_export(gz);
  CHECK(count_occurrences(dotz, "dir=none") == 12);
  CHECK(count_occurrences(dotz, "style=filled") == 6);

  auto flat = testutil::flat_octahedron();
  VelocityField<double> witness = VelocityField<double>::Zero(7, 3);
  witness.row(6) << 1, 1, 1;
  auto gw = classify_edges(flat, witness, testutil::config()).graph.value();
  std::string dotw = dot_export(gw);
  CHECK(count_occurrences(dotw, "style=filled") == 6);   // six dead vertices
  CHECK(count_occurrences(dotw, "dir=none") == 15);      // every edge unoriented
}
