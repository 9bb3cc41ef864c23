#include "abmap/error.hpp"

namespace abmap {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::SignLengthMismatch: return "SignLengthMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::AmbiguousCoding: return "AmbiguousCoding";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::NotInLanguage: return "NotInLanguage";
    case ErrorCode::InsufficientKneadingDepth: return "InsufficientKneadingDepth";
    case ErrorCode::NotAPath: return "NotAPath";
    case ErrorCode::NoComponentFound: return "NoComponentFound";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::CriticalCollision: return "CriticalCollision";
    case ErrorCode::NoWitnessInBudget: return "NoWitnessInBudget";
    case ErrorCode::AllZeroCounts: return "AllZeroCounts";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::OutputUnwritable: return "OutputUnwritable";
  }
  return "Unknown";
}

bool is_domain_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::ParseError:
    case ErrorCode::FieldMismatch:
    case ErrorCode::BetaOutOfRange:
    case ErrorCode::AlphaOutOfRange:
    case ErrorCode::SignLengthMismatch:
    case ErrorCode::OutputUnwritable:
      return false;
    default:
      return true;
  }
}

}  // namespace abmap
