#include "qps/sympgroup.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qps/error.hpp"

namespace qps {

void Signature::validate() const {
  if (n() == 0) throw Error(ErrorCode::InvalidArgument, "signature must have n >= 1");
}

Metric build_metric(Signature sig) {
  sig.validate();
  Metric eta;
  eta.diag.assign(sig.n(), -1.0);
  std::fill_n(eta.diag.begin(), sig.n_plus, 1.0);
  return eta;
}

SymplecticForm build_symplectic_form(Signature sig) {
  const Metric eta = build_metric(sig);
  const std::size_t n = sig.n();
  Matrix j(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, n + i) = eta.diag[i];
    j(n + i, i) = -eta.diag[i];
  }
  return {std::move(j)};
}

MembershipResult is_symplectic(const Matrix& m, Signature sig, double tol) {
  const std::size_t dim = sig.phase_dim();
  if (m.rows() != dim || m.cols() != dim)
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  const Matrix j = build_symplectic_form(sig).J;
  const double dev = frobenius_distance(m.transpose() * j * m, j) / j.frobenius_norm();
  return {dev <= tol, dev};
}

double algebra_defect(const Matrix& s, Signature sig) {
  const std::size_t dim = sig.phase_dim();
  if (s.rows() != dim || s.cols() != dim)
    throw Error(ErrorCode::DimensionMismatch, "generator has the wrong shape");
  const Matrix j = build_symplectic_form(sig).J;
  return (s.transpose() * j + j * s).frobenius_norm();
}

LctMatrix LctMatrix::from_matrix(Signature sig, Matrix m, double tol) {
  const auto [member, dev] = is_symplectic(m, sig, tol);
  if (!member)
    throw Error(ErrorCode::NotSymplectic,
                "membership deviation " + std::to_string(dev) + " exceeds tolerance", std::nullopt,
                dev);
  return LctMatrix(sig, std::move(m), dev);
}

LctMatrix LctMatrix::identity(Signature sig) {
  sig.validate();
  return LctMatrix(sig, Matrix::identity(sig.phase_dim()), 0.0);
}

DeSitterMatrix DeSitterMatrix::from_matrix(Signature sig, Matrix a, double tol) {
  const std::size_t n = sig.n();
  if (a.rows() != n || a.cols() != n) throw Error(ErrorCode::NotDeSitter, "wrong shape");
  const Matrix eta = build_metric(sig).matrix();
  const double dev = frobenius_distance(a.transpose() * eta * a, eta);
  if (!(dev <= tol))
    throw Error(ErrorCode::NotDeSitter, "A^T eta A deviates from eta by " + std::to_string(dev),
                std::nullopt, dev);
  const double det = determinant(a);
  if (!(std::abs(det - 1.0) <= 1e-9))
    throw Error(ErrorCode::NotDeSitter, "det A = " + std::to_string(det), std::nullopt, det);
  return DeSitterMatrix(sig, std::move(a));
}

Matrix DeSitterMatrix::inverse() const {
  const Matrix eta = build_metric(sig_).matrix();
  return eta * a_.transpose() * eta;
}

Matrix random_sp_generator(Signature sig, RngStream& stream, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "generator scale must be > 0");
  const std::size_t dim = sig.phase_dim();
  Matrix k(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) k(i, j) = stream.next_symmetric(scale);
  k = 0.5 * (k + k.transpose());
  return build_symplectic_form(sig).J * k;
}

LctMatrix exp_to_group(Signature sig, const Matrix& s) {
  const double defect = algebra_defect(s, sig);
  if (!(defect <= kAlgebraTol))
    throw Error(ErrorCode::NotInAlgebra, "S^T J + J S has norm " + std::to_string(defect),
                std::nullopt, defect);
  const double norm = s.frobenius_norm();
  if (norm > kMaxGeneratorNorm)
    throw Error(ErrorCode::NormTooLarge, "||S||_F = " + std::to_string(norm) + " > 4", std::nullopt,
                norm);
  return LctMatrix::from_matrix(sig, expm(s));
}

DeSitterMatrix random_de_sitter(Signature sig, RngStream& stream, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "generator scale must be > 0");
  const std::size_t n = sig.n();
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      w(i, j) = stream.next_symmetric(scale);
      w(j, i) = -w(i, j);
    }
  return DeSitterMatrix::from_matrix(sig, expm(build_metric(sig).matrix() * w));
}

DeSitterMatrix de_sitter_boost(Signature sig, std::size_t axis_a, std::size_t axis_b, double rapidity) {
  const std::size_t n = sig.n();
  if (axis_a >= n || axis_b >= n || axis_a == axis_b)
    throw Error(ErrorCode::IndexOutOfRange, "boost axes must be distinct and < n");
  const Metric eta = build_metric(sig);
  // omega = eta W with W antisymmetric, W(a,b) = eta_a * chi
  Matrix omega(n, n);
  omega(axis_a, axis_b) = rapidity;
  omega(axis_b, axis_a) = -eta.diag[axis_a] * eta.diag[axis_b] * rapidity;
  return DeSitterMatrix::from_matrix(sig, expm(omega));
}

LctMatrix embed_de_sitter(const DeSitterMatrix& a) {
  const Signature sig = a.signature();
  const std::size_t n = sig.n();
  Matrix m(2 * n, 2 * n);
  m.set_block(0, 0, a.matrix());
  m.set_block(n, n, a.matrix());
  return LctMatrix::from_matrix(sig, std::move(m));
}

LctMatrix fourier_lct(Signature sig, double c) {
  if (c == 0.0 || !std::isfinite(c)) throw Error(ErrorCode::ZeroScale, "Fourier scale c must be nonzero");
  sig.validate();
  const std::size_t n = sig.n();
  Matrix m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, n + i) = -1.0 / c;
    m(n + i, i) = c;
  }
  return LctMatrix::from_matrix(sig, std::move(m));
}

LctBlocks decompose_blocks(const LctMatrix& m, const ScaleConfig& scales) {
  scales.validate();
  const std::size_t n = m.signature().n();
  const Matrix& mm = m.matrix();
  LctBlocks b;
  b.A = mm.block(0, 0, n, n);
  b.C = mm.block(0, n, n, n) * (scales.hbar / (scales.ell * scales.ell));
  b.B = mm.block(n, 0, n, n) * ((scales.L * scales.L) / scales.hbar);
  b.D = mm.block(n, n, n, n);
  return b;
}

LctMatrix compose_lct(const LctMatrix& m1, const LctMatrix& m2) {
  if (!(m1.signature() == m2.signature()))
    throw Error(ErrorCode::DimensionMismatch, "cannot compose LCTs of different signatures");
  const double tol = std::max(kMembershipTol, 2.0 * (m1.deviation() + m2.deviation())) + 1e-12;
  return LctMatrix::from_matrix(m1.signature(), m1.matrix() * m2.matrix(), tol);
}

Matrix symplectic_inverse(const LctMatrix& m) {
  const Matrix j = build_symplectic_form(m.signature()).J;
  return -(j * m.matrix().transpose() * j);
}

}  // namespace qps
