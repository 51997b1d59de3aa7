#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edaplan::cli {

/// Exit codes of eda_planner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;     // bad flags, unreadable or invalid input
inline constexpr int kExitInternal = 3;  // contract violation inside the library

/// Runs one eda_planner invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edaplan::cli
