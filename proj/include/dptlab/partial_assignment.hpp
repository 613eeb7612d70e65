#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace dptlab {

/// Maximum arity of a single input string. States pack into two 32-bit words.
inline constexpr int kMaxArity = 20;

/// Bit position of variable i (0-based) inside a lexicographic input index:
/// x_1 is the most significant bit, so index("10") == 2.
constexpr std::uint32_t variable_bit(int arity, int i) {
  return std::uint32_t{1} << (arity - 1 - i);
}

/// A string u in {0,1,*}^n stored as (mask, values). Bits follow the
/// lexicographic input index layout, so x extends u iff (x & mask) == values.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(int arity);
  PartialAssignment(int arity, std::uint32_t mask, std::uint32_t values);

  /// Parses "1*0" style text.
  static PartialAssignment parse(std::string_view text);
  /// The fully fixed assignment equal to input x.
  static PartialAssignment point(int arity, std::uint32_t x);

  int arity() const noexcept { return arity_; }
  std::uint32_t mask() const noexcept { return mask_; }
  std::uint32_t values() const noexcept { return values_; }
  /// |u|: the number of fixed coordinates.
  int size() const noexcept { return std::popcount(mask_); }
  int free_count() const noexcept { return arity_ - size(); }

  bool is_fixed(int i) const noexcept { return (mask_ & variable_bit(arity_, i)) != 0; }
  int bit(int i) const noexcept { return (values_ & variable_bit(arity_, i)) != 0 ? 1 : 0; }

  /// u[x_i <- b]
  PartialAssignment with(int i, int b) const;

  bool extended_by(std::uint32_t x) const noexcept { return (x & mask_) == values_; }
  /// True iff every fixed coordinate of v is fixed to the same bit in *this.
  bool extends(const PartialAssignment& v) const noexcept {
    return (mask_ & v.mask_) == v.mask_ && (values_ & v.mask_) == v.values_;
  }

  std::uint64_t key() const noexcept { return (std::uint64_t{mask_} << 32) | values_; }
  std::string to_string() const;

  friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;

 private:
  int arity_ = 0;
  std::uint32_t mask_ = 0;
  std::uint32_t values_ = 0;
};

/// Symmetric: no coordinate is fixed to different bits.
bool agree(const PartialAssignment& u, const PartialAssignment& v);
/// u ∘ v; throws DisagreeingOverlay when !agree(u, v).
PartialAssignment overlay(const PartialAssignment& u, const PartialAssignment& v);
inline bool extends(std::uint32_t x, const PartialAssignment& v) { return v.extended_by(x); }
inline bool extends(const PartialAssignment& u, const PartialAssignment& v) { return u.extends(v); }

}  // namespace dptlab
