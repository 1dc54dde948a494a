#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace soliton {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitFalse = 1, kExitUsage = 2 };

/// Runs the command line `args` (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soliton
