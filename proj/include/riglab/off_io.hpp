#pragma once

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "riglab/core.hpp"
#include "riglab/exact.hpp"
#include "riglab/polytope.hpp"

namespace riglab {

namespace detail {

template <typename Scalar>
Scalar scalar_from_text(const std::string& token) {
  if constexpr (is_floating_mode<Scalar>) {
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad coordinate '" + token + "'");
    }
    if (used != token.size()) throw Error(ErrorCode::ParseError, "bad coordinate '" + token + "'");
    return Scalar(value);
  } else {
    return rational_from_text(token);
  }
}

inline bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
  }
  return false;
}

}  // namespace detail

/// ASCII OFF reader. Accepts general polygon faces; trailing tokens on a
/// face line (e.g. colors) are ignored.
template <typename Scalar>
GeneralPolytope<Scalar> read_off(std::istream& in) {
  std::string line;
  if (!detail::next_content_line(in, line)) throw Error(ErrorCode::ParseError, "empty OFF stream");
  {
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF") throw Error(ErrorCode::ParseError, "missing OFF header");
    std::string rest;
    if (header >> rest) throw Error(ErrorCode::ParseError, "unexpected token after OFF header");
  }
  if (!detail::next_content_line(in, line)) throw Error(ErrorCode::ParseError, "missing counts line");
  long nv = 0, nf = 0, ne = 0;
  {
    std::istringstream counts(line);
    if (!(counts >> nv >> nf >> ne) || nv < 0 || nf < 0)
      throw Error(ErrorCode::ParseError, "bad counts line '" + line + "'");
  }
  GeneralPolytope<Scalar> gp;
  gp.vertices.resize(nv, 3);
  for (long i = 0; i < nv; ++i) {
    if (!detail::next_content_line(in, line)) throw Error(ErrorCode::ParseError, "truncated vertex list");
    std::istringstream row(line);
    std::string x, y, z;
    if (!(row >> x >> y >> z)) throw Error(ErrorCode::ParseError, "bad vertex line '" + line + "'");
    gp.vertices(i, 0) = detail::scalar_from_text<Scalar>(x);
    gp.vertices(i, 1) = detail::scalar_from_text<Scalar>(y);
    gp.vertices(i, 2) = detail::scalar_from_text<Scalar>(z);
  }
  for (long i = 0; i < nf; ++i) {
    if (!detail::next_content_line(in, line)) throw Error(ErrorCode::ParseError, "truncated face list");
    std::istringstream row(line);
    long k = 0;
    if (!(row >> k) || k < 3) throw Error(ErrorCode::ParseError, "bad face line '" + line + "'");
    std::vector<int> cycle(k);
    for (long j = 0; j < k; ++j) {
      if (!(row >> cycle[j])) throw Error(ErrorCode::ParseError, "bad face line '" + line + "'");
      if (cycle[j] < 0 || cycle[j] >= nv) throw Error(ErrorCode::ParseError, "face index out of range");
    }
    gp.faces.push_back(std::move(cycle));
  }
  return gp;
}

template <typename Scalar>
GeneralPolytope<Scalar> read_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return read_off<Scalar>(in);
}

/// Writes triangles only, with round-trip-exact coordinates.
inline void write_off(std::ostream& out, const SimplicialPolytope<double>& p) {
  out << "OFF\n" << p.vertex_count() << ' ' << p.face_count() << ' ' << p.edge_count() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i < p.vertex_count(); ++i)
    out << p.vertices(i, 0) << ' ' << p.vertices(i, 1) << ' ' << p.vertices(i, 2) << '\n';
  for (int f = 0; f < p.face_count(); ++f)
    out << "3 " << p.faces(f, 0) << ' ' << p.faces(f, 1) << ' ' << p.faces(f, 2) << '\n';
}

inline void write_off_file(const std::string& path, const SimplicialPolytope<double>& p) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  write_off(out, p);
}

}  // namespace riglab
