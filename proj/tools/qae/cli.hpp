#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qae::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitProvider = 3;

/// Runs the tool on `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace qae::cli
