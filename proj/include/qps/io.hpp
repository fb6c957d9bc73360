#pragma once

#include <string>

#include <json.hpp>

#include "qps/geometry.hpp"
#include "qps/qpstate.hpp"
#include "qps/sympgroup.hpp"

namespace qps {

using json = nlohmann::json;

/// Parsed but unvalidated LCT file:
/// {"n_plus", "n_minus", "hbar", "ell", "L", "m": [[2n x 2n row-major]]}
struct LctRecord {
  Signature sig;
  ScaleConfig scales;
  Matrix m;
};

json lct_to_json(const LctMatrix& m, const ScaleConfig& scales);
/// Throws ParseError on a schema violation. Membership is not checked here.
LctRecord lct_record_from_json(const json& j);

/// {"n_plus", "n_minus", "hbar", "ell", "L", "mean_p", "mean_x", "cov",
///  "provenance"}; indices 0..n-1 of cov are momenta, n..2n-1 coordinates.
json state_to_json(const QpsState& s);
/// Throws ParseError on a schema violation or an invalid covariance.
QpsState state_from_json(const json& j);

/// Header `scale,residual`, one row per point, then `# fitted_order=...`
/// and `# final_residual=...` comment lines.
std::string sweep_to_csv(const SweepReport& r);
json sweep_to_json(const SweepReport& r);

json moments_to_json(const GaussianMoments& m);
json params_to_json(const GaussianParams& g);

/// Shortest round-trip representation ("%.17g" trimmed), stable across runs.
std::string format_double(double v);

}  // namespace qps
