#include <algorithm>
#include <cmath>
#include <complex>

#include "qps/error.hpp"
#include "qps/qpstate.hpp"

namespace qps {

GaussianParams gaussian_from_cov(double X, double Q, double x_bar, double p_bar, double hbar) {
  if (!(X > 0.0)) throw Error(ErrorCode::NonPositiveVariance, "X must be > 0", std::nullopt, X);
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be > 0");
  return GaussianParams{1.0 / (4.0 * X), -Q / (2.0 * hbar * X), x_bar, p_bar, 0.0};
}

GaussianMoments gaussian_moments_closed_form(const GaussianParams& g, double hbar) {
  GaussianMoments m;
  m.mean_x = g.x_bar;
  m.mean_p = g.p_bar;
  m.var_x = 1.0 / (4.0 * g.a_r);
  m.var_p = hbar * hbar * (g.a_r * g.a_r + g.a_i * g.a_i) / g.a_r;
  m.cov_q = -hbar * g.a_i / (2.0 * g.a_r);
  return m;
}

namespace {

using cplx = std::complex<double>;

GaussianMoments simpson_moments(const GaussianParams& g, double hbar, std::size_t intervals,
                                double window_sigmas) {
  if (intervals % 2) ++intervals;
  const double sigma = 1.0 / (2.0 * std::sqrt(g.a_r));
  const double half = window_sigmas * sigma;
  const double step = 2.0 * half / static_cast<double>(intervals);
  const cplx alpha(g.a_r, g.a_i);
  const cplx i1(0.0, 1.0);
  const cplx phase = std::exp(i1 * g.phase);

  // offsets u = x - x_bar; psi and -i hbar psi' sampled on the grid
  std::vector<double> u(intervals + 1), weight(intervals + 1);
  std::vector<cplx> psi(intervals + 1), ppsi(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    u[k] = -half + step * static_cast<double>(k);
    const cplx val = phase * std::exp(-alpha * u[k] * u[k] + i1 * g.p_bar * u[k] / hbar);
    psi[k] = val;
    ppsi[k] = -i1 * hbar * val * (-2.0 * alpha * u[k] + i1 * g.p_bar / hbar);
    weight[k] = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
  }
  auto integrate = [&](auto&& f) {
    double s = 0.0;
    for (std::size_t k = 0; k <= intervals; ++k) s += weight[k] * f(k);
    return s * step / 3.0;
  };

  const double norm = integrate([&](std::size_t k) { return std::norm(psi[k]); });
  const double du = integrate([&](std::size_t k) { return u[k] * std::norm(psi[k]); }) / norm;
  const double mean_p =
      integrate([&](std::size_t k) { return (std::conj(psi[k]) * ppsi[k]).real(); }) / norm;

  GaussianMoments m;
  m.mean_x = g.x_bar + du;
  m.mean_p = mean_p;
  m.var_x =
      integrate([&](std::size_t k) { return (u[k] - du) * (u[k] - du) * std::norm(psi[k]); }) / norm;
  m.var_p = integrate([&](std::size_t k) { return std::norm(ppsi[k] - mean_p * psi[k]); }) / norm;
  // symmetrised <(x - <x>)(p - <p>)> is the real part of the ordered product
  m.cov_q = integrate([&](std::size_t k) {
              return (std::conj(psi[k]) * (u[k] - du) * (ppsi[k] - mean_p * psi[k])).real();
            }) /
            norm;
  return m;
}

}  // namespace

GaussianMoments gaussian_moments_quadrature(const GaussianParams& g, double hbar,
                                            const QuadratureConfig& quad) {
  if (!(g.a_r > 0.0)) throw Error(ErrorCode::NonPositiveVariance, "a_r must be > 0", std::nullopt, g.a_r);
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be > 0");
  if (quad.node_count < 64) throw Error(ErrorCode::InvalidArgument, "node_count must be >= 64");
  if (!(quad.window_sigmas >= 8.0)) throw Error(ErrorCode::InvalidArgument, "window_sigmas must be >= 8");

  const GaussianMoments coarse = simpson_moments(g, hbar, quad.node_count, quad.window_sigmas);
  const GaussianMoments fine = simpson_moments(g, hbar, 2 * quad.node_count, quad.window_sigmas);

  const double sx = std::sqrt(fine.var_x);
  const double sp = std::sqrt(fine.var_p);
  const double gaps[] = {
      std::abs(fine.mean_x - coarse.mean_x) / std::max(std::abs(fine.mean_x), sx),
      std::abs(fine.mean_p - coarse.mean_p) / std::max(std::abs(fine.mean_p), sp),
      std::abs(fine.var_x - coarse.var_x) / fine.var_x,
      std::abs(fine.var_p - coarse.var_p) / fine.var_p,
      std::abs(fine.cov_q - coarse.cov_q) / (sx * sp),
  };
  const double worst = *std::max_element(std::begin(gaps), std::end(gaps));
  if (!(worst <= 1e-8))
    throw Error(ErrorCode::QuadratureNotConverged,
                "refinement changed the moments by " + std::to_string(worst), std::nullopt, worst);
  return fine;
}

}  // namespace qps
