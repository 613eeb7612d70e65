#include "dptlab/partial_assignment.hpp"

#include "dptlab/error.hpp"

namespace dptlab {

namespace {

void check_arity(int arity) {
  if (arity < 0 || arity > kMaxArity)
    throw Error(ErrorKind::ArityCap, "arity " + std::to_string(arity) + " outside [0, " +
                                         std::to_string(kMaxArity) + "]");
}

}  // namespace

PartialAssignment::PartialAssignment(int arity) : arity_(arity) { check_arity(arity); }

PartialAssignment::PartialAssignment(int arity, std::uint32_t mask, std::uint32_t values)
    : arity_(arity), mask_(mask), values_(values & mask) {
  check_arity(arity);
  if (arity < 32 && (mask >> arity) != 0)
    throw Error(ErrorKind::ArityMismatch, "mask has bits beyond the arity");
}

PartialAssignment PartialAssignment::parse(std::string_view text) {
  PartialAssignment u(static_cast<int>(text.size()));
  for (int i = 0; i < u.arity_; ++i) {
    const char c = text[static_cast<std::size_t>(i)];
    if (c == '*') continue;
    if (c != '0' && c != '1')
      throw ParseError(std::string("expected 0, 1 or * but found '") + c + "'", 1, i + 1);
    u = u.with(i, c - '0');
  }
  return u;
}

PartialAssignment PartialAssignment::point(int arity, std::uint32_t x) {
  const std::uint32_t all = arity == 32 ? ~0u : ((std::uint32_t{1} << arity) - 1);
  return PartialAssignment(arity, all, x & all);
}

PartialAssignment PartialAssignment::with(int i, int b) const {
  PartialAssignment out = *this;
  const std::uint32_t bit = variable_bit(arity_, i);
  out.mask_ |= bit;
  out.values_ = b ? (out.values_ | bit) : (out.values_ & ~bit);
  return out;
}

std::string PartialAssignment::to_string() const {
  std::string s(static_cast<std::size_t>(arity_), '*');
  for (int i = 0; i < arity_; ++i)
    if (is_fixed(i)) s[static_cast<std::size_t>(i)] = static_cast<char>('0' + bit(i));
  return s;
}

bool agree(const PartialAssignment& u, const PartialAssignment& v) {
  if (u.arity() != v.arity()) throw Error(ErrorKind::ArityMismatch, "agree on different arities");
  const std::uint32_t common = u.mask() & v.mask();
  return (u.values() & common) == (v.values() & common);
}

PartialAssignment overlay(const PartialAssignment& u, const PartialAssignment& v) {
  if (!agree(u, v))
    throw Error(ErrorKind::DisagreeingOverlay, u.to_string() + " and " + v.to_string());
  return PartialAssignment(u.arity(), u.mask() | v.mask(), u.values() | v.values());
}

}  // namespace dptlab
