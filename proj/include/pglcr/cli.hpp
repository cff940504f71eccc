#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pglcr::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kClaimFailed = 1, // a certified mathematical statement did not hold
  kUsage = 2,
  kBudgetStop = 3,
};

// Runs the pglcr command line with args (without the program name). Reports go
// to out unless --out names a file; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pglcr::cli
