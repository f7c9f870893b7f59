#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crowdbelief::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kIoFailure = 2,
  kUsage = 64,
};

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. Tables go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crowdbelief::cli
