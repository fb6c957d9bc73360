#pragma once

#include <cstddef>
#include <vector>

#include "qps/numerics.hpp"
#include "qps/scales.hpp"

namespace qps {

inline constexpr double kMembershipTol = 1e-10;
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kMaxGeneratorNorm = 4.0;
inline constexpr double kDefaultGeneratorScale = 0.3;

/// Spacetime signature (n_plus, n_minus). Defaults to the de Sitter case (1,4).
struct Signature {
  std::size_t n_plus = 1;
  std::size_t n_minus = 4;

  std::size_t n() const noexcept { return n_plus + n_minus; }
  std::size_t phase_dim() const noexcept { return 2 * n(); }
  /// Throws InvalidArgument when n == 0.
  void validate() const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Diagonal metric eta: n_plus entries +1 followed by n_minus entries -1.
struct Metric {
  std::vector<double> diag;

  std::size_t size() const noexcept { return diag.size(); }
  Matrix matrix() const { return Matrix::diagonal(diag); }
};

Metric build_metric(Signature sig);

/// J = [[0, eta], [-eta, 0]] in (p | x) ordering.
struct SymplecticForm {
  Matrix J;
};

SymplecticForm build_symplectic_form(Signature sig);

/// 2n x 2n matrix M with M^T J M = J. Means transform as row vectors
/// (v' = v M) and covariances by congruence (Sigma' = M^T Sigma M).
///
/// Layout: M = [[A, (ell^2/hbar) C], [(hbar/L^2) B, D]] with dimensionless
/// n x n blocks A, B, C, D.
class LctMatrix {
 public:
  /// Validates membership at `tol`; throws NotSymplectic with the measured
  /// deviation, DimensionMismatch when the shape is wrong.
  static LctMatrix from_matrix(Signature sig, Matrix m, double tol = kMembershipTol);
  static LctMatrix identity(Signature sig);

  const Matrix& matrix() const noexcept { return m_; }
  Signature signature() const noexcept { return sig_; }
  /// ||M^T J M - J||_F / ||J||_F
  double deviation() const noexcept { return deviation_; }

 private:
  LctMatrix(Signature sig, Matrix m, double deviation)
      : sig_(sig), m_(std::move(m)), deviation_(deviation) {}

  Signature sig_;
  Matrix m_;
  double deviation_ = 0.0;
};

/// n x n matrix with A^T eta A = eta and det A = 1.
class DeSitterMatrix {
 public:
  /// Throws NotDeSitter when ||A^T eta A - eta||_F > tol or |det A - 1| > 1e-9.
  static DeSitterMatrix from_matrix(Signature sig, Matrix a, double tol = kMembershipTol);

  const Matrix& matrix() const noexcept { return a_; }
  Signature signature() const noexcept { return sig_; }
  /// A^{-1} = eta A^T eta, exact for the group.
  Matrix inverse() const;

 private:
  DeSitterMatrix(Signature sig, Matrix a) : sig_(sig), a_(std::move(a)) {}

  Signature sig_;
  Matrix a_;
};

struct MembershipResult {
  bool member = false;
  double deviation = 0.0;
};

/// deviation = ||M^T J M - J||_F / ||J||_F. Throws DimensionMismatch.
MembershipResult is_symplectic(const Matrix& m, Signature sig, double tol = kMembershipTol);

/// ||S^T J + J S||_F
double algebra_defect(const Matrix& s, Signature sig);

/// S = J K with K symmetric, entries uniform in [-scale, scale] before
/// symmetrisation. Throws InvalidArgument unless scale > 0.
Matrix random_sp_generator(Signature sig, RngStream& stream, double scale = kDefaultGeneratorScale);

/// expm(S) for S in the algebra. Throws NotInAlgebra when the algebra
/// defect exceeds kAlgebraTol and NormTooLarge when ||S||_F > 4.
LctMatrix exp_to_group(Signature sig, const Matrix& s);

/// A = expm(eta W), W antisymmetric with entries uniform in [-scale, scale].
DeSitterMatrix random_de_sitter(Signature sig, RngStream& stream, double scale);

/// Hyperbolic rotation by rapidity chi mixing a time axis and a space axis
/// (or a rotation when both axes share a sign).
DeSitterMatrix de_sitter_boost(Signature sig, std::size_t axis_a, std::size_t axis_b, double rapidity);

/// block-diag(A, A)
LctMatrix embed_de_sitter(const DeSitterMatrix& a);

/// M_F = [[0, -I/c], [c I, 0]]; sends (p | x) to (c x | -p/c). Throws ZeroScale.
LctMatrix fourier_lct(Signature sig, double c);

struct LctBlocks {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
};

/// Dimensionless blocks: the upper-right block is divided by ell^2/hbar and
/// the lower-left by hbar/L^2.
LctBlocks decompose_blocks(const LctMatrix& m, const ScaleConfig& scales);

/// M1 M2. Throws DimensionMismatch when the signatures differ.
LctMatrix compose_lct(const LctMatrix& m1, const LctMatrix& m2);

/// M^{-1} = -J M^T J
Matrix symplectic_inverse(const LctMatrix& m);

}  // namespace qps
