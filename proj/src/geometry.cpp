#include "qps/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace qps {

ConicCoefficients conic_coefficients(const ScaleConfig& scales) {
  scales.validate();
  const double h = scales.hbar;
  ConicCoefficients k;
  k.a = 4.0 * scales.L * scales.L / (h * h);
  k.b = -2.0 * scales.gap() / (scales.ell * h);
  k.c = 1.0 / (scales.ell * scales.ell);
  k.target = scales.gamma_target();
  return k;
}

ConicPoint conic_point(const ScaleConfig& scales, double theta) {
  scales.validate();
  const double h = scales.hbar;
  const double ell = scales.ell;
  ConicPoint pt;
  pt.theta = theta;
  pt.kappa = (h / (2.0 * ell)) * std::cos(theta) + (h * scales.gap() / (2.0 * ell * ell)) * std::sin(theta);
  pt.lambda = (scales.L * scales.L / ell) * std::sin(theta);
  return pt;
}

double eta_contraction(std::span<const double> v, const Metric& eta) {
  if (v.size() != eta.size()) throw Error(ErrorCode::DimensionMismatch, "vector length differs from metric");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += eta.diag[i] * v[i] * v[i];
  return s;
}

double residual_x(std::span<const double> mean_x, const ScaleConfig& scales, const Metric& eta,
                  ResidualMode mode) {
  const double l2 = scales.L * scales.L;
  const double r = std::abs(eta_contraction(mean_x, eta) + l2);
  return mode == ResidualMode::Relative ? r / l2 : r;
}

double residual_p(std::span<const double> mean_p, const ScaleConfig& scales, const Metric& eta,
                  ResidualMode mode) {
  const double k2 = scales.momentum_scale() * scales.momentum_scale();
  const double r = std::abs(eta_contraction(mean_p, eta) + k2);
  return mode == ResidualMode::Relative ? r / k2 : r;
}

double scaled_equation_lhs(const QpsState& s) {
  return gamma_invariant(s) / s.scales.gamma_target();
}

double general_frame_gamma(double kappa, double lambda, const DeSitterMatrix& a,
                           const ScaleConfig& scales) {
  const Signature sig = a.signature();
  const std::size_t n = sig.n();
  const Metric eta = build_metric(sig);
  const ConicCoefficients k = conic_coefficients(scales);

  const auto last_row = a.matrix().row(n - 1);
  std::vector<double> p(last_row.begin(), last_row.end());
  std::vector<double> x(p);
  for (auto& v : p) v *= kappa;
  for (auto& v : x) v *= lambda;

  const Matrix minv = a.inverse();
  const double kappa_back = row_times(p, minv)[n - 1];
  const double lambda_back = row_times(x, minv)[n - 1];

  return -k.a * eta_contraction(p, eta) + 2.0 * k.b * kappa_back * lambda_back -
         k.c * eta_contraction(x, eta);
}

double conic_lambda(const ScaleConfig& scales, double kappa) {
  scales.validate();
  const double h = scales.hbar;
  const double ell = scales.ell;
  // lambda^2 - 2 (2 ell gap / hbar) kappa lambda + (4 L^2 ell^2/hbar^2) kappa^2 = L^2
  const double shift = 2.0 * ell * scales.gap() * kappa / h;
  const double disc = scales.L * scales.L - 4.0 * ell * ell * ell * ell * kappa * kappa / (h * h);
  if (disc < 0.0)
    throw Error(ErrorCode::ConicNoRealRoot, "no real lambda at kappa = " + std::to_string(kappa),
                std::nullopt, disc);
  return shift + std::sqrt(disc);
}

double conic_kappa(const ScaleConfig& scales, double lambda) {
  scales.validate();
  const double h = scales.hbar;
  const double ell = scales.ell;
  const double l2 = scales.L * scales.L;
  // kappa^2 - 2 (hbar gap / (2 ell L^2)) lambda kappa + (hbar/(2 ell L))^2 lambda^2 = (hbar/2ell)^2
  const double shift = h * scales.gap() * lambda / (2.0 * ell * l2);
  const double k0 = scales.momentum_scale();
  const double disc = k0 * k0 - h * h * lambda * lambda / (4.0 * l2 * l2);
  if (disc < 0.0)
    throw Error(ErrorCode::ConicNoRealRoot, "no real kappa at lambda = " + std::to_string(lambda),
                std::nullopt, disc);
  return shift + std::sqrt(disc);
}

std::vector<double> geometric_sequence(double first, double last, std::size_t count) {
  if (count < 2) throw Error(ErrorCode::InsufficientPoints, "need at least 2 sweep points");
  if (!(first > 0.0) || !(last > 0.0))
    throw Error(ErrorCode::NonPositiveValue, "geometric sequence needs positive endpoints");
  std::vector<double> out(count);
  // base 10 keeps decade grids on the nearest doubles to 1e-3, 1e-4, ...
  const double lf = std::log10(first);
  const double step = (std::log10(last) - lf) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::pow(10.0, lf + step * static_cast<double>(i));
  out.front() = first;
  out.back() = last;
  return out;
}

namespace {

void finish_report(SweepReport& rep, bool invert_abscissa) {
  rep.final_residual = rep.points.back().residual;
  rep.order_defined = std::all_of(rep.points.begin(), rep.points.end(),
                                  [](const SweepPoint& p) { return p.residual > kZeroResidual; });
  if (!rep.order_defined) return;
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : rep.points) pts.emplace_back(invert_abscissa ? 1.0 / p.scale : p.scale, p.residual);
  rep.fitted_order = loglog_fit(pts).slope;
}

}  // namespace

SweepReport limit_sweep_ell(const EllSweepConfig& cfg) {
  const auto& ells = cfg.ell_values;
  if (ells.size() < 2) throw Error(ErrorCode::InsufficientPoints, "need at least 2 ell values");
  for (std::size_t i = 0; i < ells.size(); ++i) {
    if (!(ells[i] > 0.0) || !(ells[i] < cfg.L))
      throw Error(ErrorCode::InvalidArgument, "ell values must lie in (0, L)", i);
    if (i > 0 && !(ells[i] < ells[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "ell values must be strictly decreasing", i);
  }
  const Metric eta = build_metric(cfg.sig);
  const std::size_t n = cfg.sig.n();

  SweepReport rep;
  rep.kind = "ell";
  rep.ds_seed = cfg.ds_seed;
  rep.config = {{"kappa", cfg.kappa},
                {"L", cfg.L},
                {"hbar", cfg.hbar},
                {"ds_scale", cfg.ds_scale},
                {"points", static_cast<double>(ells.size())}};
  for (std::size_t i = 0; i < ells.size(); ++i) {
    const ScaleConfig scales{cfg.hbar, ells[i], cfg.L};
    const double lambda = conic_lambda(scales, cfg.kappa);

    std::vector<double> x0(n, 0.0);
    x0[n - 1] = lambda;
    RngStream stream(cfg.ds_seed, i);
    const DeSitterMatrix a = random_de_sitter(cfg.sig, stream, cfg.ds_scale);
    const auto x = row_times(x0, a.matrix());

    const double r = residual_x(x, scales, eta, cfg.mode);
    const double r0 = residual_x(x0, scales, eta, cfg.mode);
    rep.frame_deviation = std::max(rep.frame_deviation, std::abs(r - r0));
    rep.points.push_back({ells[i], r});
  }
  finish_report(rep, false);
  return rep;
}

SweepReport limit_sweep_L(const LSweepConfig& cfg) {
  const auto& ls = cfg.L_values;
  if (ls.size() < 2) throw Error(ErrorCode::InsufficientPoints, "need at least 2 L values");
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (!(ls[i] > cfg.ell) || !std::isfinite(ls[i]))
      throw Error(ErrorCode::InvalidArgument, "L values must exceed ell", i);
    if (i > 0 && !(ls[i] > ls[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "L values must be strictly increasing", i);
  }
  const Metric eta = build_metric(cfg.sig);
  const std::size_t n = cfg.sig.n();

  SweepReport rep;
  rep.kind = "L";
  rep.ds_seed = cfg.ds_seed;
  rep.config = {{"lambda", cfg.lambda},
                {"ell", cfg.ell},
                {"hbar", cfg.hbar},
                {"ds_scale", cfg.ds_scale},
                {"points", static_cast<double>(ls.size())}};
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const ScaleConfig scales{cfg.hbar, cfg.ell, ls[i]};
    const double kappa = conic_kappa(scales, cfg.lambda);

    std::vector<double> p0(n, 0.0);
    p0[n - 1] = kappa;
    RngStream stream(cfg.ds_seed, i);
    const DeSitterMatrix a = random_de_sitter(cfg.sig, stream, cfg.ds_scale);
    const auto p = row_times(p0, a.matrix());

    const double r = residual_p(p, scales, eta, cfg.mode);
    const double r0 = residual_p(p0, scales, eta, cfg.mode);
    rep.frame_deviation = std::max(rep.frame_deviation, std::abs(r - r0));
    rep.points.push_back({ls[i], r});
  }
  finish_report(rep, true);
  return rep;
}

bool DualityReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

DualityReport born_duality_check(const ScaleConfig& scales, Signature sig) {
  scales.validate();
  const std::size_t n = sig.n();
  const Metric eta = build_metric(sig);
  DualityReport rep;
  rep.c = scales.hbar / (2.0 * scales.ell * scales.L);
  const LctMatrix mf = fourier_lct(sig, rep.c);
  const double k0 = scales.momentum_scale();

  double mean_err = 0.0, resid = 0.0, cov_err = 0.0, gamma_err = 0.0;
  for (const double sign : {1.0, -1.0}) {
    const QpsState s = canonical_state(sig, scales, 0.0, sign * scales.L);
    const QpsState t = transform_state(s, mf);

    std::vector<double> want(2 * n, 0.0);
    want[n - 1] = sign * k0;
    const auto got = t.mean.combined();
    double e = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) e = std::max(e, std::abs(got[i] - want[i]));
    mean_err = std::max(mean_err, e / k0);
    resid = std::max(resid, residual_p(t.mean.p, scales, eta));

    Matrix flipped = s.cov.sigma();
    for (std::size_t i = 0; i < n; ++i) {
      flipped(i, n + i) = -flipped(i, n + i);
      flipped(n + i, i) = -flipped(n + i, i);
    }
    cov_err = std::max(cov_err, frobenius_distance(t.cov.sigma(), flipped) / flipped.frobenius_norm());

    const double g0 = gamma_invariant(s);
    gamma_err = std::max(gamma_err, std::abs(gamma_invariant(t) - g0) / g0);
  }
  const Matrix sq = mf.matrix() * mf.matrix();
  const double inv_err = frobenius_distance(sq, -Matrix::identity(2 * n));

  rep.checks.push_back(make_check("x-limit points map to p-limit points", mean_err, 1e-12));
  rep.checks.push_back(make_check("residual_p of image", resid, 1e-12));
  rep.checks.push_back(make_check("covariance self-dual with Q -> -Q", cov_err, 1e-12));
  rep.checks.push_back(make_check("Gamma preserved", gamma_err, 1e-9));
  rep.checks.push_back(make_check("M_F^2 = -I", inv_err, 1e-12));
  return rep;
}

}  // namespace qps
