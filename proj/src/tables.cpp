#include "dptlab/tables.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "dptlab/error.hpp"

namespace dptlab {

namespace {

void check_arity(int arity) {
  if (arity < 0 || arity > kMaxArity)
    throw Error(ErrorKind::ArityCap, "arity " + std::to_string(arity) + " outside [0, " +
                                         std::to_string(kMaxArity) + "]");
}

}  // namespace

BooleanTable::BooleanTable(int arity, int codomain, std::vector<std::uint32_t> values)
    : arity_(arity), codomain_(codomain), values_(std::move(values)) {
  check_arity(arity);
  if (codomain < 2) throw Error(ErrorKind::DomainError, "codomain size must be at least 2");
  if (values_.size() != (std::size_t{1} << arity))
    throw Error(ErrorKind::ArityMismatch, "expected " + std::to_string(1u << arity) +
                                              " values, got " + std::to_string(values_.size()));
  for (auto v : values_)
    if (v >= static_cast<std::uint32_t>(codomain))
      throw Error(ErrorKind::DomainError, "value " + std::to_string(v) + " outside codomain");
}

BooleanTable BooleanTable::from_function(int arity, int codomain,
                                         const std::function<std::uint32_t(std::uint32_t)>& fn) {
  check_arity(arity);
  std::vector<std::uint32_t> values(std::size_t{1} << arity);
  for (std::uint32_t x = 0; x < values.size(); ++x) values[x] = fn(x);
  return BooleanTable(arity, codomain, std::move(values));
}

bool BooleanTable::is_constant() const {
  return std::all_of(values_.begin(), values_.end(),
                     [&](std::uint32_t v) { return v == values_.front(); });
}

RelationTable::RelationTable(int arity, int codomain, std::vector<char> accepted)
    : arity_(arity), codomain_(codomain), accepted_(std::move(accepted)) {
  check_arity(arity);
  if (codomain < 1) throw Error(ErrorKind::DomainError, "codomain must be nonempty");
  const std::size_t points = std::size_t{1} << arity;
  if (accepted_.size() != points * static_cast<std::size_t>(codomain))
    throw Error(ErrorKind::ArityMismatch, "relation table has the wrong size");
  for (std::uint32_t x = 0; x < points; ++x) {
    bool any = false;
    for (int b = 0; b < codomain && !any; ++b) any = contains(x, b);
    if (!any)
      throw Error(ErrorKind::NonTotalRelation,
                  "no accepted output for input " + PartialAssignment::point(arity, x).to_string());
  }
}

RelationTable::RelationTable(const BooleanTable& f)
    : arity_(f.arity()),
      codomain_(f.codomain()),
      accepted_(static_cast<std::size_t>(f.size()) * static_cast<std::size_t>(f.codomain()), 0) {
  for (std::uint32_t x = 0; x < f.size(); ++x)
    accepted_[static_cast<std::size_t>(x) * static_cast<std::size_t>(codomain_) + f(x)] = 1;
}

SearchSet::SearchSet(int arity, std::vector<PartialAssignment> witnesses)
    : arity_(arity), witnesses_(std::move(witnesses)) {
  check_arity(arity);
  for (const auto& v : witnesses_)
    if (v.arity() != arity)
      throw Error(ErrorKind::ArityMismatch, "witness " + v.to_string() + " has the wrong arity");
}

bool SearchSet::solved_by(const PartialAssignment& u) const {
  return std::any_of(witnesses_.begin(), witnesses_.end(),
                     [&](const PartialAssignment& v) { return u.extends(v); });
}

namespace functions {

BooleanTable dictator(int arity, int i) {
  return BooleanTable::from_function(
      arity, 2, [=](std::uint32_t x) { return (x & variable_bit(arity, i)) ? 1u : 0u; });
}

BooleanTable conjunction(int arity) {
  const std::uint32_t all = (std::uint32_t{1} << arity) - 1;
  return BooleanTable::from_function(arity, 2, [=](std::uint32_t x) { return x == all ? 1u : 0u; });
}

BooleanTable disjunction(int arity) {
  return BooleanTable::from_function(arity, 2, [](std::uint32_t x) { return x != 0 ? 1u : 0u; });
}

BooleanTable parity(int arity) {
  return BooleanTable::from_function(
      arity, 2, [](std::uint32_t x) { return static_cast<std::uint32_t>(std::popcount(x) & 1); });
}

BooleanTable majority(int arity) {
  return BooleanTable::from_function(arity, 2, [=](std::uint32_t x) {
    return 2 * std::popcount(x) > arity ? 1u : 0u;
  });
}

BooleanTable constant(int arity, std::uint32_t value) {
  return BooleanTable::from_function(arity, 2, [=](std::uint32_t) { return value; });
}

BooleanTable two_bit(unsigned code) {
  return BooleanTable::from_function(2, 2, [=](std::uint32_t x) { return (code >> (3 - x)) & 1u; });
}

}  // namespace functions

}  // namespace dptlab
