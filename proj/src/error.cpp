#include "royden/error.hpp"

namespace royden {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::InvalidVertex: return "InvalidVertex";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::NonIncreasingRadii: return "NonIncreasingRadii";
    case ErrorCode::TooManyPaths: return "TooManyPaths";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::EmptyBoundary: return "EmptyBoundary";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NoAdmissible: return "NoAdmissible";
    case ErrorCode::InvalidCondenser: return "InvalidCondenser";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::CutBudgetExceeded: return "CutBudgetExceeded";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::EmptyOuterBoundary: return "EmptyOuterBoundary";
    case ErrorCode::OverlappingDirections: return "OverlappingDirections";
    case ErrorCode::BadDirection: return "BadDirection";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::BadFlag: return "BadFlag";
    case ErrorCode::ConflictingSources: return "ConflictingSources";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace royden
