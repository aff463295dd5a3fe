#pragma once

// Command-line front end: encode, classify, bench, noise and synth.

#include <iosfwd>

namespace esnrae {

/// Stable exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,      // bad flags, malformed input, missing files
    kExitNumerical = 3,  // numerical failure (e.g. degenerate state matrix)
    kExitPartial = 4,    // bench finished but some cells are invalid
};

/// Parses `argv` and runs one subcommand. Never throws; errors are written
/// to `err` and mapped to an exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace esnrae
