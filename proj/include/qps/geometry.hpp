#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qps/error.hpp"
#include "qps/qpstate.hpp"
#include "qps/scales.hpp"
#include "qps/sympgroup.hpp"

namespace qps {

/// Quadratic form Q(kappa, lambda) = a kappa^2 + 2 b kappa lambda + c lambda^2
/// obtained by evaluating Gamma on a frame-F0 state, with target
/// Gamma* = L^2 / ell^2.
struct ConicCoefficients {
  double a = 0.0;       ///< 4 L^2 / hbar^2
  double b = 0.0;       ///< -2 sqrt(L^2 - ell^2) / (ell hbar)
  double c = 0.0;       ///< 1 / ell^2
  double target = 0.0;  ///< L^2 / ell^2

  double evaluate(double kappa, double lambda) const {
    return a * kappa * kappa + 2.0 * b * kappa * lambda + c * lambda * lambda;
  }
  double discriminant() const { return a * c - b * b; }
};

ConicCoefficients conic_coefficients(const ScaleConfig& scales);

struct ConicPoint {
  double kappa = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
};

/// kappa = (hbar/2ell) cos t + (hbar sqrt(L^2-ell^2)/(2 ell^2)) sin t,
/// lambda = (L^2/ell) sin t.
ConicPoint conic_point(const ScaleConfig& scales, double theta);

/// sum_m eta_mm v_m^2
double eta_contraction(std::span<const double> v, const Metric& eta);

enum class ResidualMode { Relative, Absolute };

/// |eta(x, x) + L^2|, divided by L^2 in relative mode.
double residual_x(std::span<const double> mean_x, const ScaleConfig& scales, const Metric& eta,
                  ResidualMode mode = ResidualMode::Relative);
/// |eta(p, p) + (hbar/2ell)^2|, divided by (hbar/2ell)^2 in relative mode.
double residual_p(std::span<const double> mean_p, const ScaleConfig& scales, const Metric& eta,
                  ResidualMode mode = ResidualMode::Relative);

/// Gamma(state) / (L^2 / ell^2)
double scaled_equation_lhs(const QpsState& s);

/// The eta-form of Gamma in a frame related to F0 by the de Sitter matrix A.
/// Means are <p> = kappa * (last row of A), <x> = lambda * (last row of A)
/// and the result is
///   -a eta(p,p) + 2 b (p Minv)_last (x Minv)_last - c eta(x,x)
/// with Minv = A^{-1} = eta A^T eta.
double general_frame_gamma(double kappa, double lambda, const DeSitterMatrix& a,
                           const ScaleConfig& scales);

/// Root of the conic in lambda at fixed kappa, on the branch through +L.
/// Throws ConicNoRealRoot.
double conic_lambda(const ScaleConfig& scales, double kappa);
/// Root of the conic in kappa at fixed lambda, on the branch through +hbar/2ell.
double conic_kappa(const ScaleConfig& scales, double lambda);

/// `count` values from `first` to `last`, equally spaced in log.
std::vector<double> geometric_sequence(double first, double last, std::size_t count);

struct SweepPoint {
  double scale = 0.0;
  double residual = 0.0;
};

struct SweepReport {
  std::string kind;  ///< "ell" or "L"
  std::vector<SweepPoint> points;
  /// Slope of log(residual) against log(ell) or log(1/L).
  double fitted_order = 0.0;
  /// False when some residual is below kZeroResidual (the kappa = 0 or
  /// lambda = 0 branches), where no order can be fitted.
  bool order_defined = false;
  double final_residual = 0.0;
  /// Largest change of the residual between the F0 mean and its de Sitter
  /// image over all points.
  double frame_deviation = 0.0;
  std::uint64_t ds_seed = 0;
  /// Echo of the remaining inputs, as name/value pairs.
  std::vector<std::pair<std::string, double>> config;
};

struct EllSweepConfig {
  Signature sig;
  double kappa = 1.0;
  double L = 1.0;
  double hbar = 1.0;
  std::vector<double> ell_values;  ///< strictly decreasing, each < L
  std::uint64_t ds_seed = 0;
  double ds_scale = 0.4;
  ResidualMode mode = ResidualMode::Relative;
};

struct LSweepConfig {
  Signature sig;
  double lambda = 1.0;
  double ell = 1.0;
  double hbar = 1.0;
  std::vector<double> L_values;  ///< strictly increasing, each > ell
  std::uint64_t ds_seed = 0;
  double ds_scale = 0.4;
  ResidualMode mode = ResidualMode::Relative;
};

/// Residuals at or below this are treated as exact zeros by the sweeps.
inline constexpr double kZeroResidual = 1e-12;

/// ell -> 0 limit. Each point solves lambda on the conic at fixed kappa,
/// moves the mean by a seeded de Sitter matrix (stream = point index) and
/// records residual_x.
SweepReport limit_sweep_ell(const EllSweepConfig& cfg);

/// L -> infinity limit, mirror of limit_sweep_ell with residual_p and the
/// order measured against 1/L.
SweepReport limit_sweep_L(const LSweepConfig& cfg);

struct DualityReport {
  double c = 0.0;
  std::vector<Check> checks;
  bool pass() const;
};

/// Fourier LCT with c = hbar/(2 ell L) applied to the canonical states with
/// means (0, +L) and (0, -L): the images sit at (+-hbar/2ell, 0), the
/// covariance maps to itself with Q -> -Q, Gamma is preserved and the
/// squared transform is -I.
DualityReport born_duality_check(const ScaleConfig& scales, Signature sig = {});

}  // namespace qps
