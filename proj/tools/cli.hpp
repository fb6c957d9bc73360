#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qps::cli {

/// Exit codes of the `qps` tool.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kNotSymplectic = 3,
};

/// Runs `qps <args...>`; args excludes the program name. Machine output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qps::cli
