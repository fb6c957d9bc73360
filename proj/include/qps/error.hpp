#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qps {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  SingularMatrix,
  NonFinite,
  InsufficientPoints,
  NonPositiveValue,
  NotInAlgebra,
  NormTooLarge,
  NotSymplectic,
  NotDeSitter,
  ZeroScale,
  InvalidScales,
  IndexOutOfRange,
  NonPositiveVariance,
  QuadratureNotConverged,
  ConicNoRealRoot,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
/// The message is prefixed with the code name, e.g. "InvalidScales: ...".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt,
        std::optional<double> measured = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  /// Failing pivot (SingularMatrix) or offending index.
  std::optional<std::size_t> index() const noexcept { return index_; }
  /// Measured quantity that tripped the check, when there is one.
  std::optional<double> measured() const noexcept { return measured_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
  std::optional<double> measured_;
};

/// Outcome of a numeric check: the measured error against its tolerance.
struct Check {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline Check make_check(std::string name, double measured, double tolerance) {
  return Check{std::move(name), measured, tolerance, measured <= tolerance};
}

}  // namespace qps
