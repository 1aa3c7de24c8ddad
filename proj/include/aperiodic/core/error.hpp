#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aperiodic {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NotPrimitive,
  CapacityExceeded,
  NotUnimodular,
  NotHyperbolicSelection,
  IrrationalityFailed,
  NonDiagonalizableParallel,
  WrongCodimension,
  SingularShift,
  IllConditioned,
  LeadingEigenvalueMismatch,
  RegionExceedsExtent,
  InsufficientNonzeroDeviations,
  GridNotClosed,
  BinEmpty,
  UnknownSystem,
  SpectrumOnlySystem,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Process exit code for the CLI: 2 validation, 3 budget, 4 internal.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace aperiodic
