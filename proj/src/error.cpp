#include "dptlab/error.hpp"

namespace dptlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroMassConditioning: return "ZeroMassConditioning";
    case ErrorKind::DisagreeingOverlay: return "DisagreeingOverlay";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::BudgetNegative: return "BudgetNegative";
    case ErrorKind::NonTotalRelation: return "NonTotalRelation";
    case ErrorKind::NonBooleanCodomain: return "NonBooleanCodomain";
    case ErrorKind::SizeBudgetTooSmall: return "SizeBudgetTooSmall";
    case ErrorKind::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorKind::NonBooleanXor: return "NonBooleanXor";
    case ErrorKind::MalformedTree: return "MalformedTree";
    case ErrorKind::InvalidProcess: return "InvalidProcess";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ArityCap: return "ArityCap";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(ErrorKind::ParseError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      detail_(message),
      line_(line),
      column_(column) {}

}  // namespace dptlab
