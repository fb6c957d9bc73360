#include "qps/error.hpp"

namespace qps {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::NotInAlgebra: return "NotInAlgebra";
    case ErrorCode::NormTooLarge: return "NormTooLarge";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::NotDeSitter: return "NotDeSitter";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::InvalidScales: return "InvalidScales";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::ConicNoRealRoot: return "ConicNoRealRoot";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index,
             std::optional<double> measured)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      index_(index),
      measured_(measured) {}

}  // namespace qps
