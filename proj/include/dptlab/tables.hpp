#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dptlab/partial_assignment.hpp"

namespace dptlab {

/// Explicit f: {0,1}^n -> B, values indexed lexicographically.
class BooleanTable {
 public:
  BooleanTable() = default;
  BooleanTable(int arity, int codomain, std::vector<std::uint32_t> values);

  static BooleanTable from_function(int arity, int codomain,
                                    const std::function<std::uint32_t(std::uint32_t)>& fn);

  int arity() const noexcept { return arity_; }
  int codomain() const noexcept { return codomain_; }
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(values_.size()); }
  std::uint32_t operator()(std::uint32_t x) const { return values_[x]; }
  std::span<const std::uint32_t> values() const noexcept { return values_; }

  bool is_boolean() const noexcept { return codomain_ == 2; }
  bool is_constant() const;

  friend bool operator==(const BooleanTable&, const BooleanTable&) = default;

 private:
  int arity_ = 0;
  int codomain_ = 2;
  std::vector<std::uint32_t> values_;
};

/// A total relation P ⊆ {0,1}^n × B.
class RelationTable {
 public:
  RelationTable() = default;
  /// accepted[x * codomain + b] != 0 iff (x, b) ∈ P. Throws NonTotalRelation.
  RelationTable(int arity, int codomain, std::vector<char> accepted);
  /// P_f = {(x, f(x))}.
  explicit RelationTable(const BooleanTable& f);

  int arity() const noexcept { return arity_; }
  int codomain() const noexcept { return codomain_; }
  bool contains(std::uint32_t x, int b) const {
    return accepted_[static_cast<std::size_t>(x) * static_cast<std::size_t>(codomain_) +
                     static_cast<std::size_t>(b)] != 0;
  }

  friend bool operator==(const RelationTable&, const RelationTable&) = default;

 private:
  int arity_ = 0;
  int codomain_ = 2;
  std::vector<char> accepted_;
};

/// A search problem V ⊆ {0,1,*}^n.
class SearchSet {
 public:
  SearchSet() = default;
  SearchSet(int arity, std::vector<PartialAssignment> witnesses);

  int arity() const noexcept { return arity_; }
  std::span<const PartialAssignment> witnesses() const noexcept { return witnesses_; }
  bool empty() const noexcept { return witnesses_.empty(); }

  /// True iff u extends some v ∈ V.
  bool solved_by(const PartialAssignment& u) const;

  friend bool operator==(const SearchSet&, const SearchSet&) = default;

 private:
  int arity_ = 0;
  std::vector<PartialAssignment> witnesses_;
};

namespace functions {

BooleanTable dictator(int arity, int i);
BooleanTable conjunction(int arity);
BooleanTable disjunction(int arity);
BooleanTable parity(int arity);
BooleanTable majority(int arity);
BooleanTable constant(int arity, std::uint32_t value);
/// The 2-bit function whose truth table (inputs 00,01,10,11) is the 4 low bits
/// of `code`, most significant bit first for input 00.
BooleanTable two_bit(unsigned code);

}  // namespace functions

}  // namespace dptlab
