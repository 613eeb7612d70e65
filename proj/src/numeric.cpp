#include "dptlab/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "dptlab/error.hpp"

namespace dptlab {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw ParseError("malformed number '" + std::string(text) + "'", 1, 1);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) bad_number(text);
  bool negative = false;
  std::string_view body = text;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    const mpz_class d(std::string(den), 10);
    if (d == 0) bad_number(text);
    result = Rational(mpz_class(std::string(num), 10), d);
  } else {
    std::string_view mantissa = body;
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = body.substr(0, e);
      auto exp_text = body.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) bad_number(text);
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    long fraction_digits = 0;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      auto ip = mantissa.substr(0, dot);
      auto fp = mantissa.substr(dot + 1);
      if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
          (ip.empty() && fp.empty()))
        bad_number(text);
      digits = std::string(ip) + std::string(fp);
      fraction_digits = static_cast<long>(fp.size());
    } else {
      if (!all_digits(mantissa)) bad_number(text);
      digits = std::string(mantissa);
    }
    const mpz_class numerator(digits, 10);
    long scale = exponent - fraction_digits;
    mpz_class ten_power;
    mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale >= 0) {
      result = Rational(numerator * ten_power);
    } else {
      result = Rational(numerator, ten_power);
    }
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string ScalarTraits<double>::format(double a) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", a);
  return buffer;
}

Rational floor_to_integer(const Rational& value) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return Rational(q);
}

std::int64_t floor_to_int64(const Rational& value) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q.get_si();
}

std::int64_t ceil_to_int64(const Rational& value) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q.get_si();
}

std::int64_t floor_power(std::int64_t base, const Rational& exponent) {
  if (base < 0 || sgn(exponent) < 0)
    throw Error(ErrorKind::DomainError, "floor_power needs base >= 0 and exponent >= 0");
  if (base <= 1 || sgn(exponent) == 0) return sgn(exponent) == 0 ? 1 : base;
  // base^(p/q): find largest z with z^q <= base^p. Exponents that come
  // from float64 data have huge denominators; use pow and fix up by one.
  if (exponent.get_den() > 4096 || exponent.get_num() > (1 << 20)) {
    const double approx = std::pow(static_cast<double>(base), exponent.get_d());
    if (!(approx < 9.0e18)) throw Error(ErrorKind::DomainError, "floor_power result out of range");
    return static_cast<std::int64_t>(std::floor(approx));
  }
  const unsigned long p = exponent.get_num().get_ui();
  const unsigned long q = exponent.get_den().get_ui();
  mpz_class target;
  mpz_ui_pow_ui(target.get_mpz_t(), static_cast<unsigned long>(base), p);
  mpz_class root;
  mpz_root(root.get_mpz_t(), target.get_mpz_t(), q);
  return root.get_si();
}

}  // namespace dptlab
