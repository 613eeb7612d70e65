#pragma once

#include <stdexcept>
#include <string>

namespace dptlab {

enum class ErrorKind {
  ZeroMassConditioning,
  DisagreeingOverlay,
  NotMonotone,
  BudgetNegative,
  NonTotalRelation,
  NonBooleanCodomain,
  SizeBudgetTooSmall,
  StateSpaceTooLarge,
  NonBooleanXor,
  MalformedTree,
  InvalidProcess,
  DomainError,
  ArityCap,
  ArityMismatch,
  ParseError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  /// The message without the kind and position prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

}  // namespace dptlab
