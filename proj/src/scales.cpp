#include "qps/scales.hpp"

#include <cmath>
#include <string>

#include "qps/error.hpp"

namespace qps {

void ScaleConfig::validate() const {
  if (!std::isfinite(hbar) || !std::isfinite(ell) || !std::isfinite(L))
    throw Error(ErrorCode::InvalidScales, "scales must be finite");
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidScales, "hbar must be > 0");
  if (!(ell > 0.0)) throw Error(ErrorCode::InvalidScales, "ell must be > 0");
  if (L < ell) throw Error(ErrorCode::InvalidScales, "L must be >= ell");
  const double ratio = L / ell;
  if (ratio * ratio > kMaxScaleRatioSquared)
    throw Error(ErrorCode::InvalidScales,
                "(L/ell)^2 = " + std::to_string(ratio * ratio) +
                    " exceeds 1e12; quadratic forms at this ratio lose all significant digits "
                    "in double precision",
                std::nullopt, ratio * ratio);
}

double ScaleConfig::gap() const {
  // (L - ell)(L + ell) keeps precision when ell is close to L.
  return std::sqrt((L - ell) * (L + ell));
}

}  // namespace qps
