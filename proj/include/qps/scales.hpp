#pragma once

namespace qps {

/// Largest (L/ell)^2 accepted in double precision. Physical values
/// (Planck length against the de Sitter radius, ratio^2 ~ 1e122) are far
/// beyond this and are rejected.
inline constexpr double kMaxScaleRatioSquared = 1e12;

/// Units of the phase space: reduced Planck constant, minimal length ell and
/// maximal length L.
struct ScaleConfig {
  double hbar = 1.0;
  double ell = 0.5;
  double L = 2.0;

  /// Throws InvalidScales unless hbar > 0, ell > 0, L >= ell and
  /// (L/ell)^2 <= kMaxScaleRatioSquared.
  void validate() const;

  /// sqrt(L^2 - ell^2)
  double gap() const;
  /// hbar / (2 ell): the momentum scale of the curved momentum space.
  double momentum_scale() const { return hbar / (2.0 * ell); }
  /// L^2 / ell^2
  double gamma_target() const { return (L * L) / (ell * ell); }

  friend bool operator==(const ScaleConfig&, const ScaleConfig&) = default;
};

}  // namespace qps
