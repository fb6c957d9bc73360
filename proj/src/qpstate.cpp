#include "qps/qpstate.hpp"

#include <cmath>
#include <string>

#include "qps/error.hpp"

namespace qps {

std::vector<double> PhaseMean::combined() const {
  std::vector<double> v(p);
  v.insert(v.end(), x.begin(), x.end());
  return v;
}

PhaseMean PhaseMean::from_combined(std::span<const double> v, std::size_t n) {
  if (v.size() != 2 * n) throw Error(ErrorCode::DimensionMismatch, "mean vector length");
  return {{v.begin(), v.begin() + n}, {v.begin() + n, v.end()}};
}

CovarianceMatrix::CovarianceMatrix(Matrix sigma) : sigma_(std::move(sigma)) {
  if (!sigma_.square() || sigma_.rows() % 2 != 0 || sigma_.empty())
    throw Error(ErrorCode::DimensionMismatch, "covariance must be 2n x 2n");
  if (!sigma_.all_finite()) throw Error(ErrorCode::NonFinite, "covariance has non-finite entries");
  if (!is_symmetric(sigma_, 1e-12)) throw Error(ErrorCode::InvalidArgument, "covariance is not symmetric");
  if (!is_positive_definite(sigma_))
    throw Error(ErrorCode::InvalidArgument, "covariance is not positive definite");
}

std::string_view to_string(Provenance p) {
  return p == Provenance::CanonicalF0 ? "CanonicalF0" : "Transformed";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "CanonicalF0") return Provenance::CanonicalF0;
  if (s == "Transformed") return Provenance::Transformed;
  throw Error(ErrorCode::ParseError, "unknown provenance '" + std::string(s) + "'");
}

Matrix canonical_covariance(Signature sig, const ScaleConfig& scales) {
  scales.validate();
  const std::size_t n = sig.n();
  const double p = scales.hbar * scales.hbar / (4.0 * scales.ell * scales.ell);
  const double x = scales.L * scales.L;
  const double q = scales.momentum_scale() * scales.gap();
  Matrix sigma(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    sigma(i, i) = p;
    sigma(n + i, n + i) = x;
    sigma(i, n + i) = q;
    sigma(n + i, i) = q;
  }
  return sigma;
}

QpsState canonical_state(Signature sig, const ScaleConfig& scales, double kappa, double lambda) {
  sig.validate();
  const std::size_t n = sig.n();
  PhaseMean mean{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  mean.p[n - 1] = kappa;
  mean.x[n - 1] = lambda;
  return QpsState{sig, scales, std::move(mean), CovarianceMatrix(canonical_covariance(sig, scales)),
                  Provenance::CanonicalF0};
}

QpsState apply_linear_map(const QpsState& s, const Matrix& m) {
  const std::size_t dim = s.sig.phase_dim();
  if (m.rows() != dim || m.cols() != dim)
    throw Error(ErrorCode::DimensionMismatch, "transform has the wrong shape");
  const auto v = row_times(s.mean.combined(), m);
  Matrix sigma = m.transpose() * s.cov.sigma() * m;
  // congruence is symmetric in exact arithmetic; drop the rounding asymmetry
  sigma = 0.5 * (sigma + sigma.transpose());
  return QpsState{s.sig, s.scales, PhaseMean::from_combined(v, s.sig.n()),
                  CovarianceMatrix(std::move(sigma)), Provenance::Transformed};
}

QpsState transform_state(const QpsState& s, const LctMatrix& m) {
  if (!(m.signature() == s.sig))
    throw Error(ErrorCode::DimensionMismatch, "LCT signature differs from the state signature");
  if (!(m.deviation() <= kMembershipTol))
    throw Error(ErrorCode::NotSymplectic, "LCT membership deviation above tolerance", std::nullopt,
                m.deviation());
  return apply_linear_map(s, m.matrix());
}

double gamma_invariant(const QpsState& s) {
  const auto v = s.mean.combined();
  const auto y = LuFactorization(s.cov.sigma()).solve(v);
  double g = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) g += v[i] * y[i];
  return g;
}

double saturation_residual(const QpsState& s, std::size_t axis) {
  const std::size_t n = s.sig.n();
  if (axis >= n)
    throw Error(ErrorCode::IndexOutOfRange, "axis " + std::to_string(axis) + " >= n", axis);
  const Matrix& sigma = s.cov.sigma();
  const double p = sigma(axis, axis);
  const double x = sigma(n + axis, n + axis);
  const double q = sigma(axis, n + axis);
  // Kahan's 2x2 determinant: p x - q q with one rounding
  const double w = q * q;
  const double e = std::fma(-q, q, w);
  const double f = std::fma(p, x, -w);
  const double h = s.scales.hbar;
  return (f + e) - h * h / 4.0;
}

Matrix canonical_cov_inverse_closed_form(Signature sig, const ScaleConfig& scales) {
  scales.validate();
  const std::size_t n = sig.n();
  const double h = scales.hbar;
  const double pp = 4.0 * scales.L * scales.L / (h * h);
  const double xx = 1.0 / (scales.ell * scales.ell);
  const double px = -2.0 * scales.gap() / (scales.ell * h);
  Matrix inv(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    inv(i, i) = pp;
    inv(n + i, n + i) = xx;
    inv(i, n + i) = px;
    inv(n + i, i) = px;
  }
  return inv;
}

double cov_determinant(const QpsState& s) { return determinant(s.cov.sigma()); }

}  // namespace qps
