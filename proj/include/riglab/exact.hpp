#pragma once

#include <Eigen/Core>
#include <gmpxx.h>

#include <string>
#include <string_view>

#include "riglab/core.hpp"

// NumTraits adaptor so GMP rationals can be used as an Eigen scalar type.
namespace Eigen {
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};
}  // namespace Eigen

namespace riglab {

using Rational = mpq_class;

inline double to_double(const Rational& x) { return x.get_d(); }

/// Parses "p/q", integers, and decimal literals with optional exponent
/// ("-0.125", "1e-3") into an exact rational. The decimal text is taken as
/// the exact value; nothing is rounded through a double.
inline Rational rational_from_text(std::string_view text) {
  auto fail = [&] { throw Error(ErrorCode::ParseError, "bad rational literal '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  if (text.find('/') != std::string_view::npos) {
    try {
      Rational q{std::string(text), 10};
      q.canonicalize();
      return q;
    } catch (const std::invalid_argument&) {
      fail();
    }
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool any = false;
  for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos) {
    digits += text[pos];
    any = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos) {
      digits += text[pos];
      ++frac_digits;
      any = true;
    }
  }
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_neg = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size()) fail();
    for (; pos < text.size() && text[pos] >= '0' && text[pos] <= '9'; ++pos)
      exponent = exponent * 10 + (text[pos] - '0');
    if (exp_neg) exponent = -exponent;
  }
  if (!any || pos != text.size()) fail();

  Rational value(mpz_class(digits.empty() ? "0" : digits, 10));  // explicit base; leading zeros are not octal
  long shift = exponent - frac_digits;
  if (shift != 0) {
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift > 0 ? shift : -shift));
    if (shift > 0)
      value *= Rational(pow10);
    else
      value /= Rational(pow10);
  }
  if (negative) value = -value;
  value.canonicalize();
  return value;
}

inline std::string rational_to_text(const Rational& x) { return x.get_str(); }

}  // namespace riglab
