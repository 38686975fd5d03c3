#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blocktri {

enum class ErrorCode {
  DivideByZero,
  FieldMismatch,
  FieldTooSmall,
  InvalidField,
  ParseError,
  DimensionMismatch,
  SingularMatrix,
  UnsupportedField,
  NotUnimodular,
  NoDecomposition,
  DecompositionFailed,
  SingularUpperRight,
  KernelOverlap,
  CokernelOverlap,
  DeterminantMismatch,
  NotFound,
  VerificationFailed,
  DimensionTooSmall,
  SearchTooLarge,
  NotDiagonal,
  NonFiniteEntry,
  OrientationError,
  OddDimension,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a stable code so the CLI can
// map it onto the structured {code, message, context} report.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace blocktri
