#pragma once

// Command-line front end. Exit codes: 0 success, 1 failed validation checks,
// 2 usage or configuration errors, 3 numerical non-convergence.

#include <ostream>
#include <string>
#include <vector>

namespace oqc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// `args` excludes the program name. Data goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oqc::cli
