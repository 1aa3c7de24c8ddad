#include "aperiodic/core/error.hpp"

namespace aperiodic {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NotHyperbolicSelection: return "NotHyperbolicSelection";
    case ErrorCode::IrrationalityFailed: return "IrrationalityFailed";
    case ErrorCode::NonDiagonalizableParallel: return "NonDiagonalizableParallel";
    case ErrorCode::WrongCodimension: return "WrongCodimension";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::LeadingEigenvalueMismatch: return "LeadingEigenvalueMismatch";
    case ErrorCode::RegionExceedsExtent: return "RegionExceedsExtent";
    case ErrorCode::InsufficientNonzeroDeviations: return "InsufficientNonzeroDeviations";
    case ErrorCode::GridNotClosed: return "GridNotClosed";
    case ErrorCode::BinEmpty: return "BinEmpty";
    case ErrorCode::UnknownSystem: return "UnknownSystem";
    case ErrorCode::SpectrumOnlySystem: return "SpectrumOnlySystem";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapacityExceeded:
      return 3;
    case ErrorCode::Internal:
      return 4;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace aperiodic
