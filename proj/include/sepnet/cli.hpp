#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sepnet {

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitConstructionFailure = 3,
};

// Clouds with at most this many points may use the depth-1 finite
// construction (--finite).
inline constexpr int kFiniteModeLimit = 64;

// Runs one invocation: args[0] is the program name, args[1] the verb
// (separate | synthesize | verify | quad-info). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sepnet
