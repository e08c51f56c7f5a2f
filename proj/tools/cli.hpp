#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace impactval::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kSuccess = 0, kComputationError = 1, kUsageError = 2 };

/// Bad or missing command-line input.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace impactval::cli
