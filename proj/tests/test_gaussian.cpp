#include <doctest.h>

#include <cmath>

#include "qps/error.hpp"
#include "qps/qpstate.hpp"

using namespace qps;

namespace {

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

TEST_CASE("gaussian_from_cov") {
  const double q = std::sqrt(3.75);
  const GaussianParams g = gaussian_from_cov(4.0, q, 0.0, 0.0, 1.0);
  CHECK(g.a_r == 0.0625);
  CHECK(g.a_i == doctest::Approx(-0.242062).epsilon(1e-6));
  const GaussianMoments m = gaussian_moments_closed_form(g, 1.0);
  CHECK(m.var_x == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(m.var_p == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.cov_q == doctest::Approx(q).epsilon(1e-15));

  const GaussianParams flat = gaussian_from_cov(0.5, 0.0, 0.0, 0.0, 1.0);
  CHECK(flat.a_r == 0.5);
  CHECK(flat.a_i == 0.0);
  CHECK(gaussian_moments_closed_form(flat, 1.0).var_p == 0.5);

  CHECK(code_of([] { gaussian_from_cov(0.0, 0.0, 0.0, 0.0, 1.0); }) == ErrorCode::NonPositiveVariance);
  CHECK(code_of([] { gaussian_from_cov(-1.0, 0.0, 0.0, 0.0, 1.0); }) == ErrorCode::NonPositiveVariance);
}

TEST_CASE("closed-form moments saturate the uncertainty product") {
  for (double X : {0.1, 1.0, 4.0, 30.0})
    for (double Q : {-2.0, 0.0, 0.5, 3.0})
      for (double h : {1.0, 0.3}) {
        const GaussianMoments m = gaussian_moments_closed_form(gaussian_from_cov(X, Q, 0, 0, h), h);
        CHECK(rel(m.var_x, X) <= 1e-14);
        CHECK(rel(m.var_x * m.var_p - m.cov_q * m.cov_q, h * h / 4.0) <= 1e-12);
      }
}

TEST_CASE("quadrature reproduces the closed forms") {
  struct Case {
    double X, Q, xb, pb, h;
  };
  for (const Case c : {Case{4.0, std::sqrt(3.75), 0.0, 0.0, 1.0}, Case{0.5, 0.0, 1.5, -2.0, 1.0},
                       Case{1.0, -0.7, -0.3, 0.4, 0.5}, Case{2.25, 1.2, 0.0, 3.0, 2.0}}) {
    const GaussianParams g = gaussian_from_cov(c.X, c.Q, c.xb, c.pb, c.h);
    const GaussianMoments want = gaussian_moments_closed_form(g, c.h);
    const GaussianMoments got = gaussian_moments_quadrature(g, c.h);
    CHECK(rel(got.var_x, want.var_x) <= 1e-8);
    CHECK(rel(got.var_p, want.var_p) <= 1e-8);
    if (c.Q != 0.0) CHECK(rel(got.cov_q, want.cov_q) <= 1e-8);
    else CHECK(std::abs(got.cov_q) <= 1e-10);
    CHECK(std::abs(got.mean_x - c.xb) <= 1e-10);
    CHECK(std::abs(got.mean_p - c.pb) <= 1e-10);
    const double sat = got.var_x * got.var_p - got.cov_q * got.cov_q;
    CHECK(std::abs(sat - c.h * c.h / 4.0) / (c.h * c.h / 4.0) <= 1e-10);
  }
}

TEST_CASE("quadrature agrees with canonical per-axis blocks") {
  for (const ScaleConfig sc : {ScaleConfig{1.0, 0.5, 2.0}, ScaleConfig{1.0, 1.0, 1.0}, ScaleConfig{0.5, 0.4, 1.3}}) {
    const QpsState s = canonical_state({}, sc, 0.0, 0.0);
    const double P = s.cov.P()(0, 0), X = s.cov.X()(0, 0), Q = s.cov.Q()(0, 0);
    const GaussianMoments m = gaussian_moments_quadrature(gaussian_from_cov(X, Q, 0, 0, sc.hbar), sc.hbar);
    CHECK(rel(m.var_x, X) <= 1e-8);
    CHECK(rel(m.var_p, P) <= 1e-8);
    if (Q != 0.0) CHECK(rel(m.cov_q, Q) <= 1e-8);
  }
}

TEST_CASE("quadrature configuration errors") {
  const GaussianParams g = gaussian_from_cov(1.0, 0.0, 0, 0, 1.0);
  CHECK(code_of([&] { gaussian_moments_quadrature(g, 1.0, {16, 10.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { gaussian_moments_quadrature(g, 1.0, {512, 2.0}); }) == ErrorCode::InvalidArgument);
  // steps of several standard deviations cannot resolve the packet
  CHECK(code_of([&] { gaussian_moments_quadrature(g, 1.0, {64, 400.0}); }) == ErrorCode::QuadratureNotConverged);
}
