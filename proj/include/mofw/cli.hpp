#pragma once

namespace mofw::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kSolverFailure = 2, kIoError = 3 };

/// Entry point of the `mofw` tool: subcommands solve, bench and profile.
int run(int argc, char** argv);

}  // namespace mofw::cli
