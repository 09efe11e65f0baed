#pragma once

// Batch front end: verify, spectrum, bound, sweep and bench subcommands, each
// producing a versioned JSON report (and optionally CSV tables).

#include <iosfwd>
#include <string>
#include <vector>

namespace qfock::cli {

inline constexpr const char* kSchemaVersion = "1.0";

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsageError = 2 };

/// Runs the command line `args` (without the program name), writing the report
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfock::cli
