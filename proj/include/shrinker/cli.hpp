#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shrinker {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Environment variable naming the output directory used when neither --out
/// nor the config file sets one.
inline constexpr const char* kOutDirEnv = "SHRINKER_OUT_DIR";

/// Runs one subcommand (trace, shoot-sphere, shoot-torus, verify, mesh, plot).
/// args[0] is the program name.  Diagnostics go to `err`; data only to files.
int cli_main(const std::vector<std::string>& args, std::ostream& err);

}  // namespace shrinker
