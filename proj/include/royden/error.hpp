#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace royden {

enum class ErrorCode {
  SelfLoop,
  Disconnected,
  DuplicateEdge,
  InvalidVertex,
  EmptyInput,
  UnsupportedFamily,
  NonIncreasingRadii,
  TooManyPaths,
  MissingValue,
  DomainMismatch,
  InvalidExponent,
  EmptyBoundary,
  SingularSystem,
  NotConverged,
  NoAdmissible,
  InvalidCondenser,
  TooFewPoints,
  CutBudgetExceeded,
  EmptyFamily,
  EmptyOuterBoundary,
  OverlappingDirections,
  BadDirection,
  NonFiniteValue,
  ParseError,
  IoError,
  UnknownCommand,
  BadFlag,
  ConflictingSources,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to a structured report field.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace royden
