#pragma once

#include <ostream>

#include "cli/runconfig.hpp"

namespace stiffspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_limit(const RunConfig& cfg, std::ostream& log);
int cmd_expand(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
/// The built-in constant-coefficient example (a=-1, b=2, unit coefficients);
/// runs solve + limit + expand into the output directory.
int cmd_demo(RunConfig cfg, std::ostream& log);

/// Shared exception-to-exit-code mapping for main().
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace stiffspec::cli
