#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dptlab/numeric.hpp"

namespace dptlab {

inline constexpr int kMaxFamilyK = 20;

/// Subsets of [k] are bitmasks: element j (1-based) is bit j-1.
using Subset = std::uint32_t;

/// Whether the characteristic table (2^k entries) is upward closed.
bool is_monotone(int k, std::span<const char> members);

/// An upward-closed family A ⊆ P([k]).
class MonotoneFamily {
 public:
  MonotoneFamily() = default;
  /// Throws NotMonotone when the table is not upward closed.
  MonotoneFamily(int k, std::vector<char> members);

  static MonotoneFamily empty(int k);
  static MonotoneFamily all_subsets(int k);
  /// {[k]}: only the full set.
  static MonotoneFamily full_set(int k);
  /// Smallest monotone family containing the generators.
  static MonotoneFamily upward_closure(int k, std::span<const Subset> generators);
  /// C[>= s] = {A : |A| >= s} for a real threshold s.
  static MonotoneFamily at_least(int k, const Rational& threshold);
  /// Every monotone family on [k] (Dedekind enumeration; k <= 4).
  static std::vector<MonotoneFamily> enumerate_all(int k);

  int k() const noexcept { return k_; }
  bool contains(Subset s) const { return members_[s] != 0; }
  std::span<const char> members() const noexcept { return members_; }
  std::size_t count() const;
  /// Membership depends only on |A|.
  bool is_symmetric() const;

  friend bool operator==(const MonotoneFamily&, const MonotoneFamily&) = default;

 private:
  int k_ = 0;
  std::vector<char> members_;
};

/// |A △ B|
inline int subset_distance(Subset a, Subset b) { return std::popcount(a ^ b); }

/// N_r(A) = {B : |A △ B| < r for some A ∈ A} (strict).
MonotoneFamily neighborhood(const MonotoneFamily& family, const Rational& radius);

/// Pr[D ∈ A] where j ∈ D independently with probability p[j-1].
template <class S>
S family_prob(const MonotoneFamily& family, std::span<const S> p);

/// Unnormalized variant used by the k-fold oracles: Σ_{S∈A} Π_{j∈S} hit[j]
/// Π_{j∉S} (total[j] - hit[j]).
template <class S>
S family_weight(const MonotoneFamily& family, std::span<const S> hit, std::span<const S> total);

}  // namespace dptlab
