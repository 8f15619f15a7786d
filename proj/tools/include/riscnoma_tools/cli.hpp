#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "riscnoma/orchestrator.hpp"

namespace riscnoma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;  // single run infeasible, or an oracle check failed
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;     // I/O or solver exception

int run_exit_code(RunStatus status);

/// Entry point of the `riscnoma` tool. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riscnoma::cli
