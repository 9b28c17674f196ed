#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPrecondition = 2;

/// Runs the `bar` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace bar
