#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zero {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitRuntime = 2,
};

/// Runs one subcommand (`train`, `grid`, `fewshot`, `domain-distance`, `cluster`).
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zero
