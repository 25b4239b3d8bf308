// Subcommands simulate, synthesize, tradeoff and verify.
//
// Exit codes: 0 ok, 1 verification failure, 2 domain error, 3 infeasible,
// 64 usage. Errors are reported on one stderr line as a JSON object.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nlshare::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitUsage = 64;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlshare::cli
