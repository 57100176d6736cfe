#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spdc::cli {

/// Exit codes: 0 success, 1 numeric/fit failure, 2 configuration or usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitConfig = 2;

/// Runs the command line (args excludes the program name). Data goes to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spdc::cli
