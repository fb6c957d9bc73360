#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qps/error.hpp"
#include "qps/io.hpp"
#include "qps/scales.hpp"
#include "qps/sympgroup.hpp"

namespace qps {

struct VerifyConfig {
  Signature sig;
  ScaleConfig scales;
  std::uint64_t seed = 20240601;
  std::size_t trials = 1000;
  /// Replaces every per-check tolerance when set.
  std::optional<double> tol;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool overall_pass = false;
  VerifyConfig config;
  std::string version;
};

/// Runs the invariant suites (group membership, Gamma invariance,
/// saturation, closed-form inverse, two-path Gamma, Gaussian quadrature,
/// Born duality, conic containment, limit orders). Throws InvalidScales /
/// InvalidArgument for a bad configuration.
VerificationReport run_verification(const VerifyConfig& cfg);

json report_to_json(const VerificationReport& r);

}  // namespace qps
