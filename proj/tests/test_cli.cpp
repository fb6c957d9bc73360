#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "cli.hpp"
#include "qps/io.hpp"

using namespace qps;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const json& j) {
  const auto p = std::filesystem::temp_directory_path() / ("qps_test_cli_" + name);
  std::ofstream(p) << j.dump();
  return p;
}

std::vector<json> json_lines(const std::string& s) {
  std::vector<json> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(json::parse(line));
  return v;
}

}  // namespace

TEST_CASE("verify exit codes") {
  const Result ok = run({"verify", "--trials", "50"});
  CHECK(ok.code == cli::kOk);
  const json report = json::parse(ok.out);
  CHECK(report["overall_pass"] == true);
  CHECK(report["config"]["trials"] == 50);
  CHECK(report.contains("version"));

  const Result sabotaged = run({"verify", "--trials", "20", "--tol", "1e-18"});
  CHECK(sabotaged.code == cli::kCheckFailed);
  CHECK(json::parse(sabotaged.out)["overall_pass"] == false);

  const Result bad = run({"verify", "--ell", "3", "--L", "2"});
  CHECK(bad.code == cli::kConfigError);
  CHECK(bad.err.find("InvalidScales: L must be >= ell") != std::string::npos);
  CHECK(bad.out.empty());

  CHECK(run({"verify", "--trials", "0"}).code == cli::kConfigError);
  CHECK(run({"nonsense"}).code == cli::kConfigError);
  CHECK(run({}).code == cli::kConfigError);
  CHECK(run({"--format", "xml", "verify"}).code == cli::kConfigError);
}

TEST_CASE("verify CSV output") {
  const Result r = run({"--format", "csv", "verify", "--trials", "10"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.rfind("name,max_error,tolerance,pass\n", 0) == 0);
  CHECK(r.out.find("# overall_pass=true") != std::string::npos);
}

TEST_CASE("sweep subcommands") {
  const Result ell = run({"sweep", "ell", "--kappa", "1", "--L", "1", "--points", "5", "--min", "1e-6", "--max", "1e-2"});
  CHECK(ell.code == cli::kOk);
  CHECK(ell.out.rfind("scale,residual\n0.01,", 0) == 0);
  const auto pos = ell.out.find("# fitted_order=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(ell.out.substr(pos + 15)) - 1.0) <= 0.1);

  const Result l = run({"sweep", "L", "--lambda", "1", "--ell", "1", "--points", "5", "--min", "1e2", "--max", "1e6",
                        "--format", "json"});
  CHECK(l.code == cli::kOk);
  const json j = json::parse(l.out);
  CHECK(j["kind"] == "L");
  CHECK(std::abs(j["fitted_order"].get<double>() - 1.0) <= 0.1);
  CHECK(j["points"].size() == 5);
  CHECK(j["config"]["ds_seed"] == 20240601);

  CHECK(run({"sweep", "ell", "--min", "1e-2", "--max", "1e-6"}).code == cli::kConfigError);
  CHECK(run({"sweep", "ell", "--min", "1e-6"}).code == cli::kConfigError);
  CHECK(run({"sweep", "ell", "--L", "1", "--min", "1e-6", "--max", "2"}).code == cli::kConfigError);

  const Result zero = run({"sweep", "ell", "--kappa", "0", "--L", "1", "--min", "1e-6", "--max", "1e-2"});
  CHECK(zero.code == cli::kOk);
  CHECK(zero.out.find("# fitted_order=undefined") != std::string::npos);
}

TEST_CASE("sample") {
  const Result r = run({"sample", "--count", "3"});
  CHECK(r.code == cli::kOk);
  const auto lines = json_lines(r.out);
  REQUIRE(lines.size() == 3);
  for (const auto& l : lines) {
    CHECK(std::abs(l["gamma"].get<double>() - 16.0) <= 16.0 * 1e-9);
    CHECK(std::abs(l["scaled_lhs"].get<double>() - 1.0) <= 1e-9);
    CHECK(state_from_json(l["state"]).provenance == Provenance::CanonicalF0);
  }
  CHECK(lines[0]["theta"] == 0.0);

  const auto one = json_lines(run({"sample", "--count", "1"}).out);
  CHECK(one[0]["kappa"] == 1.0);
  CHECK(one[0]["lambda"] == 0.0);
  CHECK(one[0]["state"]["mean_x"][4] == 0.0);

  const Result a = run({"sample", "--count", "4", "--theta-policy", "random", "--seed", "5"});
  const Result b = run({"sample", "--count", "4", "--theta-policy", "random", "--seed", "5"});
  const Result c = run({"sample", "--count", "4", "--theta-policy", "random", "--seed", "6"});
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(run({"sample", "--count", "0"}).code == cli::kConfigError);
}

TEST_CASE("QPS_SEED supplies the default seed") {
  const std::vector<std::string> args{"sample", "--count", "2", "--theta-policy", "random"};
  const Result flag = run({"sample", "--count", "2", "--theta-policy", "random", "--seed", "77"});
  ::setenv("QPS_SEED", "77", 1);
  const Result env = run(args);
  const Result both = run({"sample", "--count", "2", "--theta-policy", "random", "--seed", "78"});
  ::unsetenv("QPS_SEED");
  const Result plain = run(args);
  CHECK(env.out == flag.out);
  CHECK(both.out != env.out);
  CHECK(plain.out != env.out);
}

TEST_CASE("transform") {
  const ScaleConfig desk;
  const QpsState s = canonical_state({}, desk, 0.0, 2.0);
  const auto state_path = temp_file("state.json", state_to_json(s));
  const auto id_path = temp_file("id.json", lct_to_json(LctMatrix::identity({}), desk));
  const auto f_path = temp_file("fourier.json", lct_to_json(fourier_lct({}, 1.0), desk));

  const Result id = run({"transform", state_path.string(), id_path.string()});
  REQUIRE(id.code == cli::kOk);
  json out = json::parse(id.out);
  CHECK(out["provenance"] == "Transformed");
  CHECK(std::abs(out["comment"]["gamma_before"].get<double>() - out["comment"]["gamma_after"].get<double>()) <= 1e-12);
  out.erase("comment");
  const QpsState back = state_from_json(out);
  CHECK(back.mean.combined() == s.mean.combined());
  CHECK(back.cov.sigma() == s.cov.sigma());

  const Result f = run({"transform", state_path.string(), f_path.string()});
  REQUIRE(f.code == cli::kOk);
  const json fj = json::parse(f.out);
  CHECK(fj["mean_p"][4].get<double>() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(fj["mean_x"][4] == 0.0);
  CHECK(fj["cov"][0][5].get<double>() == doctest::Approx(-std::sqrt(3.75)).epsilon(1e-14));

  json perturbed = lct_to_json(LctMatrix::identity({}), desk);
  perturbed["m"][0][0] = 1.0 + 1e-3;
  const auto bad_path = temp_file("bad.json", perturbed);
  const Result bad = run({"transform", state_path.string(), bad_path.string()});
  CHECK(bad.code == cli::kNotSymplectic);
  CHECK(bad.err.find("NotSymplectic") != std::string::npos);
  CHECK(bad.out.empty());

  const auto garbage = std::filesystem::temp_directory_path() / "qps_test_cli_garbage.json";
  std::ofstream(garbage) << "{not json";
  CHECK(run({"transform", garbage.string(), id_path.string()}).code == cli::kConfigError);
  CHECK(run({"transform", "/nonexistent/state.json", id_path.string()}).code == cli::kConfigError);

  const auto small = temp_file("small.json", lct_to_json(LctMatrix::identity({1, 0}), desk));
  CHECK(run({"transform", state_path.string(), small.string()}).code == cli::kConfigError);
}

TEST_CASE("gaussian") {
  const Result r = run({"gaussian"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["params"]["a_r"] == 0.0625);
  CHECK(std::abs(j["quadrature"]["var_x"].get<double>() - 4.0) <= 4e-8);
  CHECK(std::abs(j["saturation_residual"].get<double>()) <= 0.25e-10);

  CHECK(run({"gaussian", "--X", "0"}).code == cli::kConfigError);
  CHECK(run({"gaussian", "--X", "1", "--nodes", "64", "--window", "400"}).code == cli::kCheckFailed);
}

TEST_CASE("--out writes the artifact to a file") {
  const auto p = std::filesystem::temp_directory_path() / "qps_test_cli_out.csv";
  std::filesystem::remove(p);
  const Result r = run({"sweep", "ell", "--L", "1", "--min", "1e-6", "--max", "1e-2", "--out", p.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream in(p);
  std::string header;
  std::getline(in, header);
  CHECK(header == "scale,residual");
}

TEST_CASE("built binary honours the exit-code contract") {
  auto sh = [](const std::string& args) {
    const std::string cmd = std::string(QPS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  CHECK(sh("verify --trials 20") == 0);
  CHECK(sh("verify --trials 20 --tol 1e-18") == 1);
  CHECK(sh("verify --ell 3 --L 2") == 2);
}
