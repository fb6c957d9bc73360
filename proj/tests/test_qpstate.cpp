#include <doctest.h>

#include <cmath>
#include <random>

#include "qps/error.hpp"
#include "qps/qpstate.hpp"

using namespace qps;

namespace {

const Signature kSig{1, 4};
const ScaleConfig kDesk{1.0, 0.5, 2.0};

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected qps::Error");
  return ErrorCode::InvalidArgument;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("scale validation") {
  CHECK_NOTHROW(kDesk.validate());
  CHECK(code_of([] { ScaleConfig{1.0, 3.0, 2.0}.validate(); }) == ErrorCode::InvalidScales);
  CHECK(code_of([] { ScaleConfig{0.0, 0.5, 2.0}.validate(); }) == ErrorCode::InvalidScales);
  CHECK(code_of([] { ScaleConfig{1.0, 0.0, 2.0}.validate(); }) == ErrorCode::InvalidScales);
  // Planck length against the de Sitter radius: far beyond double range for L^2/ell^2
  CHECK(code_of([] { ScaleConfig{1.054571817e-34, 1.616255e-35, 1.6e26}.validate(); }) ==
        ErrorCode::InvalidScales);
  CHECK_NOTHROW(ScaleConfig{1.0, 1.0, 1e6}.validate());
  CHECK(code_of([] { ScaleConfig{1.0, 1.0, 1.01e6}.validate(); }) == ErrorCode::InvalidScales);
}

TEST_CASE("canonical_state at desk scales") {
  const QpsState s = canonical_state(kSig, kDesk, 0.3, -1.2);
  CHECK(s.provenance == Provenance::CanonicalF0);
  CHECK(s.mean.p == std::vector<double>{0, 0, 0, 0, 0.3});
  CHECK(s.mean.x == std::vector<double>{0, 0, 0, 0, -1.2});
  const Matrix& sigma = s.cov.sigma();
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(sigma(i, i) == 1.0);
    CHECK(sigma(5 + i, 5 + i) == 4.0);
    CHECK(sigma(i, 5 + i) == doctest::Approx(1.936492).epsilon(1e-6));
    CHECK(sigma(i, i) * sigma(5 + i, 5 + i) - sigma(i, 5 + i) * sigma(i, 5 + i) ==
          doctest::Approx(0.25).epsilon(1e-14));
  }
  CHECK(sigma(0, 1) == 0.0);
  CHECK(sigma(0, 6) == 0.0);

  const QpsState flat = canonical_state(kSig, {1.0, 2.0, 2.0}, 1.0, 1.0);
  CHECK(flat.cov.Q() == Matrix(5, 5));

  CHECK(code_of([] { canonical_state(kSig, {1.0, 3.0, 2.0}, 0, 0); }) == ErrorCode::InvalidScales);
}

TEST_CASE("transform_state") {
  const QpsState s = canonical_state(kSig, kDesk, 0.0, 2.0);
  const QpsState same = transform_state(s, LctMatrix::identity(kSig));
  CHECK(same.mean.combined() == s.mean.combined());
  CHECK(same.cov.sigma() == s.cov.sigma());
  CHECK(same.provenance == Provenance::Transformed);

  const QpsState f = transform_state(s, fourier_lct(kSig, 1.0));
  CHECK(f.mean.p[4] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(f.mean.x[4] == 0.0);
  // per-axis congruence m^T Sigma m with m = [[0,-1],[1,0]]
  const double q = std::sqrt(3.75);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(f.cov.sigma()(i, i) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(f.cov.sigma()(5 + i, 5 + i) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.cov.sigma()(i, 5 + i) == doctest::Approx(-q).epsilon(1e-15));
  }

  const QpsState other = canonical_state({2, 0}, kDesk, 0, 0);
  CHECK(code_of([&] { transform_state(other, fourier_lct(kSig, 1.0)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("gamma_invariant") {
  CHECK(gamma_invariant(canonical_state(kSig, kDesk, 0, 0)) == 0.0);
  const QpsState s = canonical_state(kSig, kDesk, 1.0, 0.0);
  CHECK(rel(gamma_invariant(s), 16.0) <= 1e-14);
  CHECK(rel(gamma_invariant(s), kDesk.gamma_target()) <= 1e-14);

  // closed-form oracle: v Sigma^{-1} v^T with the explicit inverse
  const QpsState t = canonical_state(kSig, kDesk, 0.7, -1.3);
  const Matrix inv = canonical_cov_inverse_closed_form(kSig, kDesk);
  const auto v = t.mean.combined();
  CHECK(rel(gamma_invariant(t), bilinear(v, inv, v)) <= 1e-13);
}

TEST_CASE("gamma invariance property: symplectic and general invertible maps") {
  RngStream stream(2024, 0);
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const QpsState s = canonical_state(kSig, kDesk, 2.0 * u(gen), 3.0 * u(gen));
    const double g0 = gamma_invariant(s);
    const LctMatrix m = exp_to_group(kSig, random_sp_generator(kSig, stream, 0.3));
    const QpsState moved = transform_state(s, m);
    CHECK(rel(gamma_invariant(moved), g0) <= 1e-9);
    CHECK(rel(cov_determinant(moved), cov_determinant(s)) <= 1e-9);
    CHECK(is_positive_definite(moved.cov.sigma()));

    Matrix general = Matrix::identity(10);
    for (double& e : general.data()) e += 0.3 * u(gen);
    CHECK(rel(gamma_invariant(apply_linear_map(s, general)), g0) <= 1e-9);
  }
}

TEST_CASE("saturation_residual") {
  for (double kappa : {0.0, 1.0, -3.0})
    for (std::size_t mu = 0; mu < 5; ++mu)
      CHECK(std::abs(saturation_residual(canonical_state(kSig, kDesk, kappa, 1.0), mu)) <= 1e-13);

  Matrix sigma = Matrix::identity(10);
  const QpsState plain{kSig, kDesk, {std::vector<double>(5), std::vector<double>(5)},
                       CovarianceMatrix(sigma), Provenance::Transformed};
  CHECK(saturation_residual(plain, 2) == 0.75);
  CHECK(code_of([&] { saturation_residual(plain, 5); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("canonical_cov_inverse_closed_form") {
  const Matrix inv = canonical_cov_inverse_closed_form(kSig, kDesk);
  CHECK(inv(0, 0) == 16.0);
  CHECK(inv(0, 5) == doctest::Approx(-7.745967).epsilon(1e-6));
  CHECK(inv(5, 5) == 4.0);

  const ScaleConfig flat{1.0, 2.0, 2.0};
  const Matrix inv_flat = canonical_cov_inverse_closed_form(kSig, flat);
  CHECK(inv_flat(0, 0) == 16.0);
  CHECK(inv_flat(0, 5) == 0.0);
  CHECK(inv_flat(5, 5) == 0.25);

  for (const ScaleConfig sc : {kDesk, flat, ScaleConfig{2.0, 0.3, 1.5}}) {
    const Matrix sigma = canonical_covariance(kSig, sc);
    const Matrix closed = canonical_cov_inverse_closed_form(kSig, sc);
    const Matrix id = Matrix::identity(10);
    CHECK(frobenius_distance(closed * sigma, id) / id.frobenius_norm() <= 1e-12);
    CHECK(frobenius_distance(closed, solve(sigma, id)) / closed.frobenius_norm() <= 1e-12);
  }
  // wide scale ratio: the product cancels terms of size ~L^2/ell^2, so the
  // attainable agreement degrades with the conditioning of Sigma
  {
    const ScaleConfig wide{0.7, 0.01, 5.0};
    const Matrix sigma = canonical_covariance(kSig, wide);
    const Matrix closed = canonical_cov_inverse_closed_form(kSig, wide);
    const Matrix id = Matrix::identity(10);
    const double cond = LuFactorization(sigma).condition_estimate();
    CHECK(cond > 1e4);
    CHECK(frobenius_distance(closed * sigma, id) / id.frobenius_norm() <= 1e-15 * cond);
    CHECK(frobenius_distance(closed, solve(sigma, id)) / closed.frobenius_norm() <= 1e-15 * cond);
  }
  CHECK(code_of([] { canonical_cov_inverse_closed_form(kSig, {1.0, 3.0, 2.0}); }) == ErrorCode::InvalidScales);
}

TEST_CASE("cov_determinant") {
  const QpsState s = canonical_state(kSig, kDesk, 1.0, 0.0);
  CHECK(rel(cov_determinant(s), 9.765625e-4) <= 1e-12);
  const QpsState id{kSig, kDesk, {std::vector<double>(5), std::vector<double>(5)},
                    CovarianceMatrix(Matrix::identity(10)), Provenance::Transformed};
  CHECK(cov_determinant(id) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("covariance validation") {
  CHECK(code_of([] { CovarianceMatrix(Matrix{{1, 2}, {2, 1}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { CovarianceMatrix(Matrix{{1, 0.1}, {0.2, 1}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { CovarianceMatrix(Matrix::identity(3)); }) == ErrorCode::DimensionMismatch);
}
