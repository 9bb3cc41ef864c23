#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace abmap {

enum class ErrorCode {
  BetaOutOfRange,
  AlphaOutOfRange,
  SignLengthMismatch,
  ParseError,
  FieldMismatch,
  PrecisionExhausted,
  AmbiguousCoding,
  DepthExceeded,
  NotInLanguage,
  InsufficientKneadingDepth,
  NotAPath,
  NoComponentFound,
  NonConvergence,
  BudgetExceeded,
  NotAdmissible,
  CriticalCollision,
  NoWitnessInBudget,
  AllZeroCounts,
  ConfigInvalid,
  OutputUnwritable,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain errors (NotAdmissible, AllZeroCounts, ...) versus configuration
/// errors; the CLI maps the former to exit status 2 and the latter to 1.
bool is_domain_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace abmap
