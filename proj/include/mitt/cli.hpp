#pragma once

#include <string>
#include <vector>

namespace mitt::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // usage, parse, and validation errors
inline constexpr int kExitUndefined = 2;  // estimator undefined on the given sample

/// Runs one subcommand (simulate, analyze, diagnose, sweep, report, verify)
/// and returns the process exit code. `args` excludes the program name.
/// Nothing escapes: every error is rendered to stderr and mapped to a code.
int dispatch(const std::vector<std::string>& args);

int dispatch(int argc, char** argv);

}  // namespace mitt::cli
