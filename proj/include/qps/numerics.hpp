#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace qps {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

/// Row vector times matrix: (v M)_j = sum_i v_i M_ij.
std::vector<double> row_times(std::span<const double> v, const Matrix& m);
/// v M w^T.
double bilinear(std::span<const double> v, const Matrix& m, std::span<const double> w);

/// ||a - b||_F
double frobenius_distance(const Matrix& a, const Matrix& b);

/// LU factorization with partial pivoting, PA = LU packed in one matrix.
class LuFactorization {
 public:
  /// Throws SingularMatrix when a pivot magnitude falls below
  /// `pivot_floor_rel * max|A|` (the failing column is reported as index()).
  explicit LuFactorization(const Matrix& a, double pivot_floor_rel = 1e-13);

  Matrix solve(const Matrix& b) const;
  std::vector<double> solve(std::span<const double> b) const;
  double determinant() const;
  /// max|pivot| / min|pivot|
  double condition_estimate() const;
  std::size_t size() const noexcept { return lu_.rows(); }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
};

Matrix solve(const Matrix& a, const Matrix& b, double pivot_floor_rel = 1e-13);
/// solve(a, I); there is no other inverse.
Matrix inverse(const Matrix& a);
/// Determinant via LU; returns 0 for matrices the factorization rejects.
double determinant(const Matrix& a);

/// exp(S) by scaling and squaring with a degree-18 Taylor core. The scaled
/// operand has Frobenius norm <= 0.5. Throws NonFinite on overflow.
Matrix expm(const Matrix& s);

/// ||A - A^T||_F <= rel_tol * ||A||_F
bool is_symmetric(const Matrix& a, double rel_tol = 1e-12);
/// Cholesky succeeds with strictly positive pivots.
bool is_positive_definite(const Matrix& a);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double max_abs_residual = 0.0;
};

/// Least-squares line through (log x, log y).
FitResult loglog_fit(std::span<const std::pair<double, double>> points);

/// Deterministic uniform source: xoshiro256** seeded by splitmix64.
///
/// State initialisation: a splitmix64 generator is started at
/// `seed ^ (0x9E3779B97F4A7C15 * (stream_index + 1))` and its first four
/// outputs become s[0..3]. Doubles are `(next() >> 11) * 2^-53`, so the
/// sequence is bit-identical on every platform with IEEE doubles.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double next_unit();
  /// Uniform in [-half_width, half_width].
  double next_symmetric(double half_width);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t s_[4];
};

/// n values uniform in [-half_width, half_width]. Throws InvalidArgument
/// unless half_width > 0.
std::vector<double> rng_uniform_symmetric(RngStream& stream, double half_width, std::size_t n);

}  // namespace qps
