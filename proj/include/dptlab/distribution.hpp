#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dptlab/error.hpp"
#include "dptlab/numeric.hpp"
#include "dptlab/partial_assignment.hpp"

namespace dptlab {

/// Probability mass over {0,1}^n in lexicographic order. S is Rational
/// (exact) or double (float64, normalized on construction).
template <class S>
class InputDistribution {
 public:
  using Scalar = S;

  InputDistribution() = default;
  InputDistribution(int arity, std::vector<S> mass);

  static InputDistribution uniform(int arity);
  /// Independent bits with Pr[x_i = 1] = one_probability[i].
  static InputDistribution product(std::span<const S> one_probability);

  int arity() const noexcept { return arity_; }
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(mass_.size()); }
  const S& operator[](std::uint32_t x) const { return mass_[x]; }
  std::span<const S> mass() const noexcept { return mass_; }
  static constexpr const char* representation() { return ScalarTraits<S>::tag; }

  bool full_support() const;
  /// Pr[x extends u].
  S mass_of(const PartialAssignment& u) const;
  /// μ^(u); throws ZeroMassConditioning when Pr[x extends u] = 0.
  InputDistribution condition(const PartialAssignment& u) const;

  friend bool operator==(const InputDistribution&, const InputDistribution&) = default;

 private:
  int arity_ = 0;
  std::vector<S> mass_;
};

template <class S>
InputDistribution<S>::InputDistribution(int arity, std::vector<S> mass)
    : arity_(arity), mass_(std::move(mass)) {
  if (arity < 0 || arity > kMaxArity)
    throw Error(ErrorKind::ArityCap, "distribution arity " + std::to_string(arity));
  if (mass_.size() != (std::size_t{1} << arity))
    throw Error(ErrorKind::ArityMismatch, "expected " + std::to_string(1u << arity) +
                                              " weights, got " + std::to_string(mass_.size()));
  S total = 0;
  for (const S& w : mass_) {
    if (w < 0) throw Error(ErrorKind::DomainError, "negative probability weight");
    total += w;
  }
  if constexpr (ScalarTraits<S>::exact) {
    if (total != 1)
      throw Error(ErrorKind::DomainError, "weights sum to " + to_string(total) + ", not 1");
  } else {
    if (std::fabs(total - 1.0) > ScalarTraits<S>::tolerance)
      throw Error(ErrorKind::DomainError, "weights sum to " + ScalarTraits<S>::format(total));
    // Totals within 1e-12 are left alone so serialized weights read back bit-exactly.
    if (std::fabs(total - 1.0) > 1e-12)
      for (S& w : mass_) w /= total;
  }
}

template <class S>
InputDistribution<S> InputDistribution<S>::uniform(int arity) {
  const std::size_t points = std::size_t{1} << arity;
  S each = S(1) / S(static_cast<long>(points));
  return InputDistribution(arity, std::vector<S>(points, each));
}

template <class S>
InputDistribution<S> InputDistribution<S>::product(std::span<const S> one_probability) {
  const int arity = static_cast<int>(one_probability.size());
  std::vector<S> mass(std::size_t{1} << arity);
  for (std::uint32_t x = 0; x < mass.size(); ++x) {
    S w = 1;
    for (int i = 0; i < arity; ++i) {
      const S& p = one_probability[static_cast<std::size_t>(i)];
      if (p < 0 || p > 1) throw Error(ErrorKind::DomainError, "bit probability outside [0,1]");
      if (x & variable_bit(arity, i)) {
        w *= p;
      } else {
        w *= S(1) - p;
      }
    }
    mass[x] = w;
  }
  return InputDistribution(arity, std::move(mass));
}

template <class S>
bool InputDistribution<S>::full_support() const {
  for (const S& w : mass_)
    if (!(w > 0)) return false;
  return true;
}

template <class S>
S InputDistribution<S>::mass_of(const PartialAssignment& u) const {
  if (u.arity() != arity_) throw Error(ErrorKind::ArityMismatch, "assignment arity mismatch");
  S total = 0;
  for (std::uint32_t x = 0; x < mass_.size(); ++x)
    if (u.extended_by(x)) total += mass_[x];
  return total;
}

template <class S>
InputDistribution<S> InputDistribution<S>::condition(const PartialAssignment& u) const {
  const S total = mass_of(u);
  if (ScalarTraits<S>::is_zero(total))
    throw Error(ErrorKind::ZeroMassConditioning, "no supported input extends " + u.to_string());
  std::vector<S> out(mass_.size(), S(0));
  for (std::uint32_t x = 0; x < mass_.size(); ++x)
    if (u.extended_by(x)) out[x] = mass_[x] / total;
  InputDistribution result;
  result.arity_ = arity_;
  result.mass_ = std::move(out);
  return result;
}

}  // namespace dptlab
