#include "qps/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "qps/error.hpp"

namespace qps {

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "': " + e.what());
  }
}

Matrix matrix_from_json(const json& j, const char* key, std::size_t dim) {
  const auto rows = field<std::vector<std::vector<double>>>(j, key);
  if (rows.size() != dim)
    throw Error(ErrorCode::ParseError, std::string("'") + key + "' must have " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (rows[i].size() != dim)
      throw Error(ErrorCode::ParseError,
                  std::string("'") + key + "' row " + std::to_string(i) + " has the wrong length");
    for (std::size_t k = 0; k < dim; ++k) m(i, k) = rows[i][k];
  }
  if (!m.all_finite()) throw Error(ErrorCode::ParseError, std::string("'") + key + "' has non-finite entries");
  return m;
}

Signature signature_from_json(const json& j) {
  Signature sig{field<std::size_t>(j, "n_plus"), field<std::size_t>(j, "n_minus")};
  if (sig.n() == 0) throw Error(ErrorCode::ParseError, "signature must have n >= 1");
  return sig;
}

ScaleConfig scales_from_json(const json& j) {
  ScaleConfig s{field<double>(j, "hbar"), field<double>(j, "ell"), field<double>(j, "L")};
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return s;
}

}  // namespace

json lct_to_json(const LctMatrix& m, const ScaleConfig& scales) {
  json j;
  j["n_plus"] = m.signature().n_plus;
  j["n_minus"] = m.signature().n_minus;
  j["hbar"] = scales.hbar;
  j["ell"] = scales.ell;
  j["L"] = scales.L;
  j["m"] = matrix_to_json(m.matrix());
  return j;
}

LctRecord lct_record_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "LCT document must be a JSON object");
  LctRecord r;
  r.sig = signature_from_json(j);
  r.scales = scales_from_json(j);
  r.m = matrix_from_json(j, "m", r.sig.phase_dim());
  return r;
}

json state_to_json(const QpsState& s) {
  json j;
  j["n_plus"] = s.sig.n_plus;
  j["n_minus"] = s.sig.n_minus;
  j["hbar"] = s.scales.hbar;
  j["ell"] = s.scales.ell;
  j["L"] = s.scales.L;
  j["mean_p"] = s.mean.p;
  j["mean_x"] = s.mean.x;
  j["cov"] = matrix_to_json(s.cov.sigma());
  j["provenance"] = std::string(to_string(s.provenance));
  return j;
}

QpsState state_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "state document must be a JSON object");
  const Signature sig = signature_from_json(j);
  const ScaleConfig scales = scales_from_json(j);
  PhaseMean mean{field<std::vector<double>>(j, "mean_p"), field<std::vector<double>>(j, "mean_x")};
  if (mean.p.size() != sig.n() || mean.x.size() != sig.n())
    throw Error(ErrorCode::ParseError, "mean vectors must have length n");
  Matrix sigma = matrix_from_json(j, "cov", sig.phase_dim());
  const Provenance prov = provenance_from_string(field<std::string>(j, "provenance"));
  try {
    return QpsState{sig, scales, std::move(mean), CovarianceMatrix(std::move(sigma)), prov};
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string sweep_to_csv(const SweepReport& r) {
  std::ostringstream out;
  out << "scale,residual\n";
  for (const auto& p : r.points) out << format_double(p.scale) << ',' << format_double(p.residual) << '\n';
  out << "# fitted_order=" << (r.order_defined ? format_double(r.fitted_order) : "undefined") << '\n';
  out << "# final_residual=" << format_double(r.final_residual) << '\n';
  return out.str();
}

json sweep_to_json(const SweepReport& r) {
  json j;
  j["kind"] = r.kind;
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({{"scale", p.scale}, {"residual", p.residual}});
  j["points"] = pts;
  j["fitted_order"] = r.order_defined ? json(r.fitted_order) : json(nullptr);
  j["final_residual"] = r.final_residual;
  j["frame_deviation"] = r.frame_deviation;
  json cfg = json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  cfg["ds_seed"] = r.ds_seed;
  j["config"] = cfg;
  return j;
}

json moments_to_json(const GaussianMoments& m) {
  return {{"mean_x", m.mean_x}, {"var_x", m.var_x}, {"mean_p", m.mean_p},
          {"var_p", m.var_p},   {"cov_q", m.cov_q}};
}

json params_to_json(const GaussianParams& g) {
  return {{"a_r", g.a_r}, {"a_i", g.a_i}, {"x_bar", g.x_bar}, {"p_bar", g.p_bar}, {"K_phase", g.phase}};
}

}  // namespace qps
