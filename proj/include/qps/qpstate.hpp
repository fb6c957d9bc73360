#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qps/numerics.hpp"
#include "qps/scales.hpp"
#include "qps/sympgroup.hpp"

namespace qps {

/// Mean momenta and coordinates; the combined row vector is (p | x).
struct PhaseMean {
  std::vector<double> p;
  std::vector<double> x;

  std::vector<double> combined() const;
  static PhaseMean from_combined(std::span<const double> v, std::size_t n);
};

/// Symmetric positive definite 2n x 2n matrix [[P, Q], [Q^T, X]].
class CovarianceMatrix {
 public:
  /// Throws InvalidArgument when sigma is not symmetric (relative 1e-12)
  /// or not positive definite.
  explicit CovarianceMatrix(Matrix sigma);

  const Matrix& sigma() const noexcept { return sigma_; }
  std::size_t n() const noexcept { return sigma_.rows() / 2; }
  Matrix P() const { return sigma_.block(0, 0, n(), n()); }
  Matrix Q() const { return sigma_.block(0, n(), n(), n()); }
  Matrix X() const { return sigma_.block(n(), n(), n(), n()); }

 private:
  Matrix sigma_;
};

enum class Provenance { CanonicalF0, Transformed };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

struct QpsState {
  Signature sig;
  ScaleConfig scales;
  PhaseMean mean;
  CovarianceMatrix cov;
  Provenance provenance = Provenance::Transformed;
};

/// Frame F0 state: mean (0..0, kappa | 0..0, lambda) along the last axis,
/// P = hbar^2/(4 ell^2) I, X = L^2 I, Q = (hbar/2ell) sqrt(L^2 - ell^2) I.
QpsState canonical_state(Signature sig, const ScaleConfig& scales, double kappa, double lambda);

/// mean' = mean M, Sigma' = M^T Sigma M. Throws NotSymplectic /
/// DimensionMismatch.
QpsState transform_state(const QpsState& s, const LctMatrix& m);

/// Same congruence for any invertible M; no membership requirement.
QpsState apply_linear_map(const QpsState& s, const Matrix& m);

/// v Sigma^{-1} v^T, computed by a linear solve against Sigma.
double gamma_invariant(const QpsState& s);

/// P_mm X_mm - Q_mm^2 - hbar^2/4 for a single axis.
double saturation_residual(const QpsState& s, std::size_t axis);

/// Closed-form inverse of the canonical covariance:
/// [[ (4L^2/hbar^2) I, -(2/(ell hbar)) sqrt(L^2-ell^2) I ],
///  [ -(2/(ell hbar)) sqrt(L^2-ell^2) I, (1/ell^2) I ]]
Matrix canonical_cov_inverse_closed_form(Signature sig, const ScaleConfig& scales);

/// Canonical covariance alone (what canonical_state puts in cov).
Matrix canonical_covariance(Signature sig, const ScaleConfig& scales);

double cov_determinant(const QpsState& s);

// ---------------------------------------------------------------------------
// One-axis Gaussian wave packet
//   psi(x) = N exp(-(a_r + i a_i)(x - x_bar)^2 + i p_bar (x - x_bar)/hbar)

struct GaussianParams {
  double a_r = 0.0;
  double a_i = 0.0;
  double x_bar = 0.0;
  double p_bar = 0.0;
  double phase = 0.0;
};

/// a_r = 1/(4X), a_i = -Q/(2 hbar X). Throws NonPositiveVariance unless X > 0.
GaussianParams gaussian_from_cov(double X, double Q, double x_bar, double p_bar, double hbar);

struct QuadratureConfig {
  std::size_t node_count = 512;
  double window_sigmas = 10.0;
};

struct GaussianMoments {
  double mean_x = 0.0;
  double var_x = 0.0;
  double mean_p = 0.0;
  double var_p = 0.0;
  double cov_q = 0.0;
};

/// Closed forms: var_x = 1/(4 a_r), var_p = hbar^2 (a_r^2 + a_i^2)/a_r,
/// cov_q = -hbar a_i/(2 a_r).
GaussianMoments gaussian_moments_closed_form(const GaussianParams& g, double hbar);

/// Composite Simpson over [x_bar - w sigma, x_bar + w sigma] of |psi|^2
/// moments and of the momentum moments built from psi'. The result at
/// node_count is compared against 2*node_count; a relative disagreement
/// above 1e-8 throws QuadratureNotConverged.
GaussianMoments gaussian_moments_quadrature(const GaussianParams& g, double hbar,
                                            const QuadratureConfig& quad = {});

}  // namespace qps
