#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace dptlab {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal such as "0.25" or "1e-3" into an
/// exact rational. Throws Error(ParseError) on malformed text.
Rational parse_rational(std::string_view text);

/// p/q in lowest terms (mpq_class(p, q) alone does not reduce).
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Canonical text form: "3/4", "1", "-1/2".
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }
inline double to_double(double value) { return value; }

Rational floor_to_integer(const Rational& value);
std::int64_t floor_to_int64(const Rational& value);
std::int64_t ceil_to_int64(const Rational& value);

/// Largest integer z >= 0 with z <= base^exponent, computed exactly
/// (exponent = p/q, so z^q <= base^p is an integer comparison).
std::int64_t floor_power(std::int64_t base, const Rational& exponent);

/// Scalar backends used by every engine: exact rationals and float64.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* tag = "exact-rational";
  static Rational from_rational(const Rational& r) { return r; }
  static bool le(const Rational& a, const Rational& b) { return a <= b; }
  static bool eq(const Rational& a, const Rational& b) { return a == b; }
  static bool is_zero(const Rational& a) { return sgn(a) == 0; }
  static Rational abs(const Rational& a) { return ::abs(a); }
  static std::string format(const Rational& a) { return dptlab::to_string(a); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* tag = "float64";
  static constexpr double tolerance = 1e-9;
  static double from_rational(const Rational& r) { return r.get_d(); }
  static bool le(double a, double b) { return a <= b + tolerance; }
  static bool eq(double a, double b) { return std::fabs(a - b) <= tolerance; }
  static bool is_zero(double a) { return a == 0.0; }
  static double abs(double a) { return std::fabs(a); }
  static std::string format(double a);
};

template <class S>
S power(const S& base, int exponent) {
  S result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace dptlab
