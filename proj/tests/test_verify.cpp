#include <doctest.h>

#include "qps/error.hpp"
#include "qps/verify.hpp"

using namespace qps;

TEST_CASE("verification passes on defaults") {
  VerifyConfig cfg;
  cfg.trials = 200;
  const VerificationReport r = run_verification(cfg);
  CHECK(r.overall_pass);
  for (const auto& c : r.checks) {
    INFO(c.name << " measured " << c.measured << " tol " << c.tolerance);
    CHECK(c.pass);
  }
  const json j = report_to_json(r);
  CHECK(j["overall_pass"] == true);
  CHECK(j["checks"].size() == r.checks.size());
}

TEST_CASE("verification is deterministic for a fixed seed") {
  VerifyConfig cfg;
  cfg.trials = 50;
  CHECK(report_to_json(run_verification(cfg)).dump() == report_to_json(run_verification(cfg)).dump());
}

TEST_CASE("tolerance sabotage fails the run") {
  VerifyConfig cfg;
  cfg.trials = 20;
  cfg.tol = 1e-18;
  CHECK_FALSE(run_verification(cfg).overall_pass);
}

TEST_CASE("invalid configuration") {
  VerifyConfig cfg;
  cfg.scales = {1.0, 3.0, 2.0};
  CHECK_THROWS_AS(run_verification(cfg), Error);
  VerifyConfig none;
  none.trials = 0;
  CHECK_THROWS_AS(run_verification(none), Error);
}
