#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace unialg::cli {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unialg::cli
