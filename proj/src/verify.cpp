#include "qps/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qps/geometry.hpp"
#include "qps/qpstate.hpp"
#include "qps/version.hpp"

namespace qps {

namespace {

// Stream indices keep the suites independent of each other.
enum Stream : std::uint64_t {
  kMembershipStream = 1,
  kClosureStream,
  kDeSitterStream,
  kGammaStream,
  kGeneralMapStream,
  kTwoPathStream,
};

class Suite {
 public:
  explicit Suite(const VerifyConfig& cfg) : cfg_(cfg) {}

  void add(std::string name, double measured, double tolerance) {
    checks_.push_back(make_check(std::move(name), measured, cfg_.tol.value_or(tolerance)));
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  const VerifyConfig& cfg_;
  std::vector<Check> checks_;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

void membership_suite(const VerifyConfig& cfg, Suite& out) {
  const Signature sig = cfg.sig;
  const Matrix j = build_symplectic_form(sig).J;
  RngStream stream(cfg.seed, kMembershipStream);
  double dev = 0.0, det_err = 0.0, inv_err = 0.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const LctMatrix m = exp_to_group(sig, random_sp_generator(sig, stream, kDefaultGeneratorScale));
    dev = std::max(dev, m.deviation());
    det_err = std::max(det_err, std::abs(determinant(m.matrix()) - 1.0));
    inv_err = std::max(inv_err, frobenius_distance(m.matrix() * symplectic_inverse(m),
                                                   Matrix::identity(sig.phase_dim())));
  }
  out.add("symplectic_membership", dev, 1e-10);
  out.add("symplectic_determinant", det_err, 1e-9);
  out.add("symplectic_inverse_formula", inv_err, 1e-9);

  RngStream pairs(cfg.seed, kClosureStream);
  double closure = 0.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const LctMatrix a = exp_to_group(sig, random_sp_generator(sig, pairs, kDefaultGeneratorScale));
    const LctMatrix b = exp_to_group(sig, random_sp_generator(sig, pairs, kDefaultGeneratorScale));
    closure = std::max(closure, is_symplectic((a.matrix() * b.matrix()), sig).deviation);
  }
  out.add("group_closure", closure, 1e-9);

  const Metric eta = build_metric(sig);
  const Matrix em = eta.matrix();
  RngStream ds(cfg.seed, kDeSitterStream);
  double ds_dev = 0.0, embed_dev = 0.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const DeSitterMatrix a = random_de_sitter(sig, ds, 0.4);
    ds_dev = std::max(ds_dev, frobenius_distance(a.matrix().transpose() * em * a.matrix(), em));
    embed_dev = std::max(embed_dev, embed_de_sitter(a).deviation());
  }
  out.add("de_sitter_membership", ds_dev, 1e-10);
  out.add("de_sitter_embedding", embed_dev, 1e-10);
}

void gamma_suite(const VerifyConfig& cfg, Suite& out) {
  const Signature sig = cfg.sig;
  const ScaleConfig& sc = cfg.scales;
  const QpsState s = canonical_state(sig, sc, sc.momentum_scale(), 0.0);
  const double g0 = gamma_invariant(s);
  const double det0 = cov_determinant(s);
  out.add("gamma_canonical_equals_L2_over_ell2", rel(g0, sc.gamma_target()), 1e-12);
  out.add("canonical_determinant", rel(det0, std::pow(sc.hbar * sc.hbar / 4.0, double(sig.n()))), 1e-12);

  RngStream stream(cfg.seed, kGammaStream);
  double g_dev = 0.0, det_dev = 0.0, lhs_dev = 0.0;
  std::size_t lost_pd = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const LctMatrix m = exp_to_group(sig, random_sp_generator(sig, stream, kDefaultGeneratorScale));
    const QpsState moved = transform_state(s, m);
    g_dev = std::max(g_dev, rel(gamma_invariant(moved), g0));
    det_dev = std::max(det_dev, rel(cov_determinant(moved), det0));
    lhs_dev = std::max(lhs_dev, std::abs(scaled_equation_lhs(moved) - 1.0));
    if (!is_positive_definite(moved.cov.sigma())) ++lost_pd;
  }
  out.add("gamma_invariance", g_dev, 1e-9);
  out.add("scaled_equation_lhs", lhs_dev, 1e-9);
  out.add("determinant_preservation", det_dev, 1e-9);
  out.add("positive_definiteness_lost", static_cast<double>(lost_pd), 0.0);

  // Gamma needs only invertibility of the map
  RngStream general(cfg.seed, kGeneralMapStream);
  const std::size_t dim = sig.phase_dim();
  double general_dev = 0.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Matrix m = Matrix::identity(dim);
    for (double& v : m.data()) v += general.next_symmetric(0.3);
    general_dev = std::max(general_dev, rel(gamma_invariant(apply_linear_map(s, m)), g0));
  }
  out.add("gamma_invariance_invertible_maps", general_dev, 1e-9);
}

void saturation_suite(const VerifyConfig& cfg, Suite& out) {
  const Signature sig = cfg.sig;
  const ScaleConfig& sc = cfg.scales;
  double worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    const ConicPoint pt = conic_point(sc, 2.0 * std::numbers::pi * k / 16.0);
    const QpsState s = canonical_state(sig, sc, pt.kappa, pt.lambda);
    for (std::size_t mu = 0; mu < sig.n(); ++mu) worst = std::max(worst, std::abs(saturation_residual(s, mu)));
  }
  out.add("saturation_canonical", worst, 1e-13);

  const Matrix closed = canonical_cov_inverse_closed_form(sig, sc);
  const Matrix sigma = canonical_covariance(sig, sc);
  const Matrix id = Matrix::identity(sig.phase_dim());
  out.add("closed_form_inverse_product", frobenius_distance(closed * sigma, id) / id.frobenius_norm(), 1e-12);
  out.add("closed_form_inverse_vs_solve",
          frobenius_distance(closed, solve(sigma, id)) / closed.frobenius_norm(), 1e-12);
}

void gaussian_suite(const VerifyConfig& cfg, Suite& out) {
  const ScaleConfig& sc = cfg.scales;
  const Matrix sigma = canonical_covariance(cfg.sig, sc);
  const std::size_t n = cfg.sig.n();
  const double h = sc.hbar;
  double sat = 0.0, moments = 0.0;
  for (std::size_t mu = 0; mu < n; ++mu) {
    const double P = sigma(mu, mu), X = sigma(n + mu, n + mu), Q = sigma(mu, n + mu);
    const GaussianParams g = gaussian_from_cov(X, Q, 0.25 * double(mu), -0.5 * double(mu), h);
    const GaussianMoments m = gaussian_moments_quadrature(g, h);
    sat = std::max(sat, std::abs(m.var_x * m.var_p - m.cov_q * m.cov_q - h * h / 4.0) / (h * h / 4.0));
    moments = std::max({moments, rel(m.var_x, X), rel(m.var_p, P), std::abs(m.cov_q - Q) / std::sqrt(P * X)});
  }
  out.add("gaussian_quadrature_saturation", sat, 1e-10);
  out.add("gaussian_quadrature_moments", moments, 1e-8);
}

void geometry_suite(const VerifyConfig& cfg, Suite& out) {
  const Signature sig = cfg.sig;
  const ScaleConfig& sc = cfg.scales;
  const ConicCoefficients k = conic_coefficients(sc);

  double contain = 0.0;
  for (int t = 0; t < 256; ++t) {
    const ConicPoint pt = conic_point(sc, 2.0 * std::numbers::pi * t / 256.0);
    contain = std::max(contain, rel(k.evaluate(pt.kappa, pt.lambda), k.target));
  }
  out.add("conic_containment", contain, 1e-10);

  RngStream stream(cfg.seed, kTwoPathStream);
  double two_path = 0.0;
  const std::size_t pairs = std::min<std::size_t>(cfg.trials, 100);
  for (std::size_t t = 0; t < pairs; ++t) {
    const DeSitterMatrix a = random_de_sitter(sig, stream, 0.4);
    const ConicPoint pt = conic_point(sc, 2.0 * std::numbers::pi * stream.next_unit());
    const double direct =
        gamma_invariant(transform_state(canonical_state(sig, sc, pt.kappa, pt.lambda), embed_de_sitter(a)));
    two_path = std::max(two_path, rel(general_frame_gamma(pt.kappa, pt.lambda, a, sc), direct));
  }
  out.add("two_path_gamma", two_path, 1e-9);

  for (const Check& c : born_duality_check(sc, sig).checks) out.add("born_duality: " + c.name, c.measured, c.tolerance);

  EllSweepConfig ell;
  ell.sig = sig;
  ell.ell_values = geometric_sequence(1e-2, 1e-6, 5);
  ell.ds_seed = cfg.seed;
  const SweepReport re = limit_sweep_ell(ell);
  out.add("limit_order_ell", re.order_defined ? std::abs(re.fitted_order - 1.0) : 1.0, 0.1);

  LSweepConfig lcfg;
  lcfg.sig = sig;
  lcfg.L_values = geometric_sequence(1e2, 1e6, 5);
  lcfg.ds_seed = cfg.seed;
  const SweepReport rl = limit_sweep_L(lcfg);
  out.add("limit_order_L", rl.order_defined ? std::abs(rl.fitted_order - 1.0) : 1.0, 0.1);
}

}  // namespace

VerificationReport run_verification(const VerifyConfig& cfg) {
  cfg.sig.validate();
  cfg.scales.validate();
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (cfg.tol && !(*cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");

  Suite suite(cfg);
  membership_suite(cfg, suite);
  gamma_suite(cfg, suite);
  saturation_suite(cfg, suite);
  gaussian_suite(cfg, suite);
  geometry_suite(cfg, suite);

  VerificationReport r;
  r.checks = suite.take();
  r.overall_pass = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
  r.config = cfg;
  r.version = kVersion;
  return r;
}

json report_to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"max_error", c.measured}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  json cfg{{"n_plus", r.config.sig.n_plus},
           {"n_minus", r.config.sig.n_minus},
           {"hbar", r.config.scales.hbar},
           {"ell", r.config.scales.ell},
           {"L", r.config.scales.L},
           {"seed", r.config.seed},
           {"trials", r.config.trials},
           {"tol", r.config.tol ? json(*r.config.tol) : json(nullptr)}};
  return {{"checks", checks}, {"overall_pass", r.overall_pass}, {"config", cfg}, {"version", r.version}};
}

}  // namespace qps
