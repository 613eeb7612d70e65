#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dptlab/monotone_family.hpp"
#include "dptlab/numeric.hpp"

namespace dptlab {

enum class Verdict { holds, vacuous, violated, indeterminate };
const char* to_string(Verdict v);
/// The more severe of two verdicts (violated > indeterminate > holds > vacuous).
Verdict worst(Verdict a, Verdict b);

/// A bound value. When `exact` is set the value is that rational; when
/// `power_base` is set it is coefficient·base^exponent, which is still
/// compared exactly (x ≤ c·b^(p/q) ⟺ (x/c)^q ≤ b^p). Otherwise only the
/// float64 `value` is known.
struct BoundValue {
  double value = 0;
  std::optional<Rational> exact;
  std::optional<std::int64_t> power_base;
  Rational coefficient;
  Rational exponent;

  static BoundValue of(const Rational& r);
  static BoundValue real(double v);
  static BoundValue scaled_power(const Rational& coefficient, std::int64_t base, const Rational& exponent);

  bool is_exact() const { return exact.has_value() || power_base.has_value(); }
  bool vacuous() const;
  std::string describe() const;
};

/// Below this margin a float comparison is reported as indeterminate.
inline constexpr double kFloatMargin = 1e-12;

/// Sign of (x - bound); nullopt when only floats are available and the
/// margin is under kFloatMargin.
std::optional<int> compare(const Rational& x, const BoundValue& bound);
std::optional<int> compare(const BoundValue& a, const BoundValue& b);

/// Verdict for the claim oracle ≤ bound.
Verdict judge(const Rational& oracle, const BoundValue& bound);
Verdict judge(double oracle, const BoundValue& bound);

// ---- binomial distribution -------------------------------------------------

Rational binom_pmf(int k, const Rational& p, int s);
/// Pr[Y ≥ threshold] (or Pr[Y > threshold] when strict), Y ~ B(k, p); the
/// threshold is real and compared against integer s without rounding.
Rational binom_tail(int k, const Rational& p, const Rational& threshold, bool strict);
/// Pr[Y < threshold] (or Pr[Y ≤ threshold] when !strict).
Rational binom_lower_tail(int k, const Rational& p, const Rational& threshold, bool strict);

// ---- the bound formulas ----------------------------------------------------

struct DptBound {
  BoundValue exact;    // (2^{αε}(1-ε))^k
  BoundValue relaxed;  // (1-ε+0.84αε)^k
  bool exact_below_relaxed = false;
  std::optional<Rational> budget;  // αεTk
};
DptBound dpt_bound(const Rational& eps, const Rational& alpha, int k, std::optional<std::int64_t> T = std::nullopt);

struct WorstCaseBound {
  Rational success;  // (1/2+γ)^k
  Rational budget;   // γ³R₂k/11
};
WorstCaseBound worstcase_bound(const Rational& gamma, int k, const Rational& r2);

struct XorBound {
  Rational exact;  // ½(1 + Pr_{B(k,1-2ε)}[Y > (1-αε)k])
  double closed;   // ½(1 + [1-2ε+21α ln(2/α) ε]^k)
  bool exact_le_closed = false;
};
XorBound xor_bound(const Rational& eps, const Rational& alpha, int k);

struct ThresholdBound {
  BoundValue stmt1;  // |B|^{αεk} Pr_{B(k,1-ε)}[Y ≥ ηk]
  BoundValue stmt2;  // Pr_{B(k,1-ε)}[Y ≥ (η-αε)k]
  BoundValue stmt3;  // min of both at η = 1
  std::optional<double> chern;  // [1-ε+21α ln(1/α) ε]^k, α ≤ 1/2
};
ThresholdBound threshold_bound(const Rational& eps, const Rational& alpha, const Rational& eta, int k, int codomain);

struct GenThresholdBound {
  BoundValue stmt1;  // |B|^{αεk} Pr[D ∈ A]
  BoundValue stmt2;  // Pr[D ∈ N_{αεk}(A)]
  MonotoneFamily neighborhood;
};
GenThresholdBound gen_threshold_bound(const Rational& eps, const Rational& alpha, int k, const MonotoneFamily& a,
                                      int codomain);

/// Pr_{B(k,1-ε)}[Y > (η-αε)k].
Rational search_bound(const Rational& eps, const Rational& alpha, const Rational& eta, int k);
/// search_bound with η = 1.
Rational zerr_bound(const Rational& eps, const Rational& alpha, int k);

struct WcZerrBound {
  double success;  // [22α ln(1/α)]^k
  Rational budget;  // α²R₀k/4
};
WcZerrBound wc_zerr_bound(const Rational& alpha, int k, const Rational& r0);

struct SizeBound {
  BoundValue success;       // 2^{αεk}(1-ε)^k
  double size_budget = 0;   // T^{αεk}
  std::int64_t size_floor = 1;  // ⌊T^{αεk}⌋, exact
};
SizeBound size_bound(const Rational& eps, const Rational& alpha, int k, std::int64_t T);

/// [1-δ+21β ln(1/β)δ]^k
double chernoff_small(const Rational& delta, const Rational& beta, int k);
/// ((p/(p+t))^{p+t} (q/(q-t))^{q-t})^k, q = 1-p.
double chernoff_general(const Rational& p, const Rational& t, int k);
/// h(x) = x ln(1/x).
double entropy_h(double x);

}  // namespace dptlab
