#include "dptlab/bounds.hpp"

#include <cmath>
#include <cstdio>

#include "dptlab/error.hpp"

namespace dptlab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::vacuous: return "vacuous";
    case Verdict::violated: return "violated";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) {
    switch (v) {
      case Verdict::violated: return 3;
      case Verdict::indeterminate: return 2;
      case Verdict::holds: return 1;
      case Verdict::vacuous: return 0;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

namespace {

[[noreturn]] void domain(const std::string& what) { throw Error(ErrorKind::DomainError, what); }

void require_open_closed(const Rational& x, const Rational& lo, const Rational& hi, const char* name) {
  if (!(x > lo && x <= hi))
    domain(std::string(name) + " = " + to_string(x) + " outside (" + to_string(lo) + ", " + to_string(hi) + "]");
}

void require_open(const Rational& x, const Rational& lo, const Rational& hi, const char* name) {
  if (!(x > lo && x < hi))
    domain(std::string(name) + " = " + to_string(x) + " outside (" + to_string(lo) + ", " + to_string(hi) + ")");
}

void require_k(int k) {
  if (k < 1) domain("k must be at least 1");
}

// Exponents with larger terms are compared in float64 instead.
constexpr unsigned long kMaxExactRoot = 4096;
constexpr unsigned long kMaxExactPower = 1ul << 20;

std::optional<int> float_sign(double diff) {
  if (std::fabs(diff) < kFloatMargin) return std::nullopt;
  return diff > 0 ? 1 : -1;
}

/// sign(x - c·b^e) for c > 0, e ≥ 0, b ≥ 1; nullopt when too large for exact.
std::optional<int> exact_power_sign(const Rational& x, const Rational& c, std::int64_t b, const Rational& e) {
  if (sgn(c) <= 0 || sgn(e) < 0 || b < 1) return std::nullopt;
  if (sgn(x) <= 0) return -1;
  const Rational r = x / c;
  if (!e.get_num().fits_ulong_p() || !e.get_den().fits_ulong_p()) return std::nullopt;
  const unsigned long p = e.get_num().get_ui();
  const unsigned long q = e.get_den().get_ui();
  if (q > kMaxExactRoot || p > kMaxExactPower) return std::nullopt;
  mpz_class lhs, rhs, den_power, base_power;
  mpz_pow_ui(lhs.get_mpz_t(), r.get_num_mpz_t(), q);
  mpz_pow_ui(den_power.get_mpz_t(), r.get_den_mpz_t(), q);
  mpz_ui_pow_ui(base_power.get_mpz_t(), static_cast<unsigned long>(b), p);
  rhs = base_power * den_power;
  const int c_sign = cmp(lhs, rhs);
  return c_sign > 0 ? 1 : (c_sign < 0 ? -1 : 0);
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

}  // namespace

// ---- BoundValue ------------------------------------------------------------

BoundValue BoundValue::of(const Rational& r) {
  BoundValue b;
  b.exact = r;
  b.value = r.get_d();
  return b;
}

BoundValue BoundValue::real(double v) {
  BoundValue b;
  b.value = v;
  return b;
}

BoundValue BoundValue::scaled_power(const Rational& coefficient, std::int64_t base, const Rational& exponent) {
  if (sgn(coefficient) == 0 || sgn(exponent) == 0) return of(sgn(coefficient) == 0 ? Rational(0) : coefficient);
  if (exponent.get_den() == 1 && exponent.get_num().fits_ulong_p() && exponent.get_num().get_ui() <= 4096) {
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(base), exponent.get_num().get_ui());
    return of(coefficient * Rational(pw));
  }
  BoundValue b;
  b.power_base = base;
  b.coefficient = coefficient;
  b.exponent = exponent;
  b.value = coefficient.get_d() * std::pow(static_cast<double>(base), exponent.get_d());
  return b;
}

bool BoundValue::vacuous() const {
  const auto s = compare(Rational(1), *this);
  return s ? *s < 0 : value > 1;
}

std::string BoundValue::describe() const {
  if (exact) return to_string(*exact) + " (" + format_double(value) + ")";
  if (power_base)
    return format_double(value) + " (= " + to_string(coefficient) + " * " + std::to_string(*power_base) + "^(" +
           to_string(exponent) + "))";
  return format_double(value);
}

std::optional<int> compare(const Rational& x, const BoundValue& bound) {
  if (bound.exact) {
    const int c = cmp(x, *bound.exact);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
  }
  if (bound.power_base) {
    if (auto s = exact_power_sign(x, bound.coefficient, *bound.power_base, bound.exponent)) return s;
  }
  return float_sign(x.get_d() - bound.value);
}

std::optional<int> compare(const BoundValue& a, const BoundValue& b) {
  if (a.exact) return compare(*a.exact, b);
  if (b.exact) {
    const auto s = compare(*b.exact, a);
    if (!s) return s;
    return -*s;
  }
  if (a.power_base && b.power_base && *a.power_base == *b.power_base && sgn(a.coefficient) > 0 &&
      sgn(b.coefficient) > 0) {
    // c1·b^e1 vs c2·b^e2 ⟺ c1/c2 vs b^(e2-e1)
    const Rational d = b.exponent - a.exponent;
    if (sgn(d) >= 0) {
      if (auto s = exact_power_sign(a.coefficient / b.coefficient, Rational(1), *a.power_base, d)) return s;
    } else {
      if (auto s = exact_power_sign(b.coefficient / a.coefficient, Rational(1), *a.power_base, Rational(-d)))
        return -*s;
    }
  }
  return float_sign(a.value - b.value);
}

Verdict judge(const Rational& oracle, const BoundValue& bound) {
  const auto s = compare(oracle, bound);
  if (!s) return Verdict::indeterminate;
  if (*s > 0) return Verdict::violated;
  return bound.vacuous() ? Verdict::vacuous : Verdict::holds;
}

Verdict judge(double oracle, const BoundValue& bound) {
  const auto s = float_sign(oracle - bound.value);
  if (!s) return Verdict::indeterminate;
  if (*s > 0) return Verdict::violated;
  return bound.vacuous() ? Verdict::vacuous : Verdict::holds;
}

// ---- binomial --------------------------------------------------------------

Rational binom_pmf(int k, const Rational& p, int s) {
  if (k < 0) domain("k must be nonnegative");
  if (p < 0 || p > 1) domain("p = " + to_string(p) + " outside [0,1]");
  if (s < 0 || s > k) domain("s = " + std::to_string(s) + " outside [0, k]");
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(s));
  return Rational(c) * power(p, s) * power(Rational(1 - p), k - s);
}

Rational binom_tail(int k, const Rational& p, const Rational& threshold, bool strict) {
  if (k < 0) domain("k must be nonnegative");
  Rational total = 0;
  for (int s = 0; s <= k; ++s) {
    const bool in = strict ? Rational(s) > threshold : Rational(s) >= threshold;
    if (in) total += binom_pmf(k, p, s);
  }
  return total;
}

Rational binom_lower_tail(int k, const Rational& p, const Rational& threshold, bool strict) {
  if (k < 0) domain("k must be nonnegative");
  Rational total = 0;
  for (int s = 0; s <= k; ++s) {
    const bool in = strict ? Rational(s) < threshold : Rational(s) <= threshold;
    if (in) total += binom_pmf(k, p, s);
  }
  return total;
}

// ---- formulas --------------------------------------------------------------

DptBound dpt_bound(const Rational& eps, const Rational& alpha, int k, std::optional<std::int64_t> T) {
  require_open_closed(eps, 0, 1, "epsilon");
  require_open_closed(alpha, 0, 1, "alpha");
  require_k(k);
  DptBound out;
  const Rational ae = alpha * eps;
  out.exact = BoundValue::scaled_power(power(Rational(1 - eps), k), 2, Rational(ae * k));
  out.relaxed = BoundValue::of(power(Rational(1 - eps + ratio(21, 25) * ae), k));
  const auto s = compare(out.exact, out.relaxed);
  out.exact_below_relaxed = s && *s < 0;
  if (T) {
    if (*T < 0) throw Error(ErrorKind::BudgetNegative, "T must be nonnegative");
    out.budget = ae * Rational(*T) * k;
  }
  return out;
}

WorstCaseBound worstcase_bound(const Rational& gamma, int k, const Rational& r2) {
  require_open(gamma, 0, ratio(1, 4), "gamma");
  require_k(k);
  if (sgn(r2) < 0) domain("R2 must be nonnegative");
  return {power(Rational(ratio(1, 2) + gamma), k), Rational(gamma * gamma * gamma * r2 * k / 11)};
}

XorBound xor_bound(const Rational& eps, const Rational& alpha, int k) {
  require_open_closed(eps, 0, ratio(1, 2), "epsilon");
  require_open_closed(alpha, 0, 1, "alpha");
  require_k(k);
  XorBound out;
  out.exact = (1 + binom_tail(k, Rational(1 - 2 * eps), Rational((1 - alpha * eps) * k), true)) / 2;
  const double a = alpha.get_d(), e = eps.get_d();
  out.closed = 0.5 * (1 + std::pow(1 - 2 * e + 21 * a * std::log(2 / a) * e, k));
  out.exact_le_closed = out.exact.get_d() <= out.closed;
  return out;
}

ThresholdBound threshold_bound(const Rational& eps, const Rational& alpha, const Rational& eta, int k, int codomain) {
  require_open_closed(eps, 0, 1, "epsilon");
  require_open_closed(alpha, 0, 1, "alpha");
  require_open_closed(eta, 0, 1, "eta");
  require_k(k);
  if (codomain < 2) domain("|B| must be at least 2");
  ThresholdBound out;
  const Rational q = 1 - eps;
  const Rational spread = alpha * eps * k;
  out.stmt1 = BoundValue::scaled_power(binom_tail(k, q, Rational(eta * k), false), codomain, spread);
  out.stmt2 = BoundValue::of(binom_tail(k, q, Rational((eta - alpha * eps) * k), false));
  const BoundValue first = BoundValue::scaled_power(power(q, k), codomain, spread);
  const BoundValue second = BoundValue::of(binom_tail(k, q, Rational((1 - alpha * eps) * k), false));
  const auto s = compare(first, second);
  out.stmt3 = (s && *s <= 0) || (!s && first.value <= second.value) ? first : second;
  if (alpha <= ratio(1, 2)) {
    const double a = alpha.get_d(), e = eps.get_d();
    out.chern = std::pow(1 - e + 21 * a * std::log(1 / a) * e, k);
  }
  return out;
}

GenThresholdBound gen_threshold_bound(const Rational& eps, const Rational& alpha, int k, const MonotoneFamily& a,
                                      int codomain) {
  require_open_closed(eps, 0, 1, "epsilon");
  require_open_closed(alpha, 0, 1, "alpha");
  require_k(k);
  if (a.k() != k) throw Error(ErrorKind::ArityMismatch, "family is not over [k]");
  if (codomain < 2) domain("|B| must be at least 2");
  const std::vector<Rational> p(static_cast<std::size_t>(k), Rational(1 - eps));
  const Rational radius = alpha * eps * k;
  GenThresholdBound out;
  out.stmt1 = BoundValue::scaled_power(family_prob<Rational>(a, p), codomain, radius);
  out.neighborhood = neighborhood(a, radius);
  out.stmt2 = BoundValue::of(family_prob<Rational>(out.neighborhood, p));
  return out;
}

Rational search_bound(const Rational& eps, const Rational& alpha, const Rational& eta, int k) {
  require_open_closed(eps, 0, 1, "epsilon");
  require_open_closed(alpha, 0, 1, "alpha");
  require_open_closed(eta, 0, 1, "eta");
  require_k(k);
  return binom_tail(k, Rational(1 - eps), Rational((eta - alpha * eps) * k), true);
}

Rational zerr_bound(const Rational& eps, const Rational& alpha, int k) { return search_bound(eps, alpha, 1, k); }

WcZerrBound wc_zerr_bound(const Rational& alpha, int k, const Rational& r0) {
  require_open_closed(alpha, 0, ratio(1, 2), "alpha");
  require_k(k);
  if (sgn(r0) < 0) domain("R0 must be nonnegative");
  const double a = alpha.get_d();
  return {std::pow(22 * a * std::log(1 / a), k), Rational(alpha * alpha * r0 * k / 4)};
}

SizeBound size_bound(const Rational& eps, const Rational& alpha, int k, std::int64_t T) {
  require_open_closed(eps, 0, 1, "epsilon");
  require_open_closed(alpha, 0, 1, "alpha");
  require_k(k);
  if (T < 1) domain("T must be at least 1");
  const Rational spread = alpha * eps * k;
  SizeBound out;
  out.success = BoundValue::scaled_power(power(Rational(1 - eps), k), 2, spread);
  out.size_budget = std::pow(static_cast<double>(T), spread.get_d());
  out.size_floor = floor_power(T, spread);
  return out;
}

double chernoff_small(const Rational& delta, const Rational& beta, int k) {
  require_open(delta, 0, 1, "delta");
  require_open_closed(beta, 0, ratio(1, 2), "beta");
  require_k(k);
  const double d = delta.get_d(), b = beta.get_d();
  return std::pow(1 - d + 21 * b * std::log(1 / b) * d, k);
}

double chernoff_general(const Rational& p, const Rational& t, int k) {
  require_open(p, 0, 1, "p");
  const Rational q = 1 - p;
  if (t < 0 || t >= q) domain("t = " + to_string(t) + " outside [0, 1-p)");
  require_k(k);
  const double pd = p.get_d(), qd = q.get_d(), td = t.get_d();
  const double base = std::pow(pd / (pd + td), pd + td) * std::pow(qd / (qd - td), qd - td);
  return std::pow(base, k);
}

double entropy_h(double x) {
  if (!(x > 0 && x <= 1)) throw Error(ErrorKind::DomainError, "h(x) needs x in (0, 1]");
  return x * std::log(1 / x);
}

}  // namespace dptlab
