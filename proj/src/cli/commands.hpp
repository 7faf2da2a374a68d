#pragma once

#include <string>
#include <vector>

namespace tvbayes::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,   // bad flags, unreadable or malformed files
  kModel = 3,   // model validation (rank condition, bad parameters)
  kCapacity = 4,
  kDivergence = 5,
  kConvergence = 6,
  kDegeneracy = 7,
};

/// Environment variable naming the directory for relative output prefixes.
inline constexpr const char* kOutputDirEnv = "TVBAYES_OUTPUT_DIR";

int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace tvbayes::cli
