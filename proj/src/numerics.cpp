#include "qps/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qps/error.hpp"

namespace qps {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged initializer list");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_)
    throw Error(ErrorCode::DimensionMismatch, "block out of range");
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw Error(ErrorCode::DimensionMismatch, "block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<double> row_times(std::span<const double> v, const Matrix& m) {
  if (v.size() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "row vector times matrix");
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  return out;
}

double bilinear(std::span<const double> v, const Matrix& m, std::span<const double> w) {
  if (w.size() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "bilinear form");
  const auto vm = row_times(v, m);
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += vm[j] * w[j];
  return s;
}

double frobenius_distance(const Matrix& a, const Matrix& b) { return (a - b).frobenius_norm(); }

// ---------------------------------------------------------------------------
// LU

LuFactorization::LuFactorization(const Matrix& a, double pivot_floor_rel) : lu_(a) {
  if (!a.square() || a.empty()) throw Error(ErrorCode::DimensionMismatch, "LU needs a square matrix");
  if (!a.all_finite()) throw Error(ErrorCode::NonFinite, "LU input has non-finite entries");
  const std::size_t n = a.rows();
  const double floor = pivot_floor_rel * a.max_abs();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    if (best <= floor || best == 0.0)
      throw Error(ErrorCode::SingularMatrix, "pivot " + std::to_string(k) + " below floor", k, best);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
      sign_ = -sign_;
    }
    const double piv = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / piv;
      lu_(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Matrix LuFactorization::solve(const Matrix& b) const {
  const std::size_t n = lu_.rows();
  if (b.rows() != n) throw Error(ErrorCode::DimensionMismatch, "solve: row count of B");
  const std::size_t m = b.cols();
  Matrix y(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) y(i, j) = b(perm_[i], j);
  // forward, unit lower
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) {
      const double f = lu_(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) y(i, j) -= f * y(k, j);
    }
  // backward
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double f = lu_(ii, k);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) y(ii, j) -= f * y(k, j);
    }
    const double d = lu_(ii, ii);
    for (std::size_t j = 0; j < m; ++j) y(ii, j) /= d;
  }
  return y;
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const {
  Matrix col(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) col(i, 0) = b[i];
  const Matrix y = solve(col);
  return {y.data().begin(), y.data().end()};
}

double LuFactorization::determinant() const {
  double d = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

double LuFactorization::condition_estimate() const {
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lu_.rows(); ++i) {
    hi = std::max(hi, std::abs(lu_(i, i)));
    lo = std::min(lo, std::abs(lu_(i, i)));
  }
  return hi / lo;
}

Matrix solve(const Matrix& a, const Matrix& b, double pivot_floor_rel) {
  return LuFactorization(a, pivot_floor_rel).solve(b);
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

double determinant(const Matrix& a) {
  try {
    return LuFactorization(a, 0.0).determinant();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularMatrix) return 0.0;
    throw;
  }
}

// ---------------------------------------------------------------------------
// expm

Matrix expm(const Matrix& s) {
  if (!s.square() || s.empty()) throw Error(ErrorCode::DimensionMismatch, "expm needs a square matrix");
  if (!s.all_finite()) throw Error(ErrorCode::NonFinite, "expm input has non-finite entries");
  const std::size_t n = s.rows();
  const double norm = s.frobenius_norm();

  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    if (squarings > 1000) throw Error(ErrorCode::NonFinite, "expm operand norm too large");
  }
  const Matrix scaled = s * std::ldexp(1.0, -squarings);

  // Taylor to degree 18, Horner form: I + X(I + X/2(I + X/3(...)))
  constexpr int kDegree = 18;
  Matrix result = Matrix::identity(n);
  for (int k = kDegree; k >= 1; --k) {
    result = Matrix::identity(n) + (scaled * result) * (1.0 / k);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;

  if (!result.all_finite()) throw Error(ErrorCode::NonFinite, "expm overflowed");
  return result;
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (!a.square()) return false;
  return frobenius_distance(a, a.transpose()) <= rel_tol * a.frobenius_norm();
}

bool is_positive_definite(const Matrix& a) {
  if (!a.square() || a.empty() || !a.all_finite()) return false;
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return false;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = 0.5 * (a(i, j) + a(j, i));
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// log-log regression

FitResult loglog_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw Error(ErrorCode::InsufficientPoints, "log-log fit needs at least 2 points");
  std::vector<double> lx, ly;
  lx.reserve(points.size());
  ly.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x, y] = points[i];
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw Error(ErrorCode::NonPositiveValue, "log-log fit needs positive finite coordinates", i);
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InsufficientPoints, "log-log fit needs distinct abscissae");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < lx.size(); ++i)
    fit.max_abs_residual =
        std::max(fit.max_abs_residual, std::abs(ly[i] - (fit.intercept + fit.slope * lx[i])));
  return fit;
}

// ---------------------------------------------------------------------------
// RNG

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index) {
  std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
  for (auto& w : s_) w = splitmix64(x);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::next_symmetric(double half_width) { return half_width * (2.0 * next_unit() - 1.0); }

std::vector<double> rng_uniform_symmetric(RngStream& stream, double half_width, std::size_t n) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw Error(ErrorCode::InvalidArgument, "half_width must be positive");
  std::vector<double> out(n);
  for (auto& v : out) v = stream.next_symmetric(half_width);
  return out;
}

}  // namespace qps
