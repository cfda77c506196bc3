#pragma once

// Command-line front end. Subcommands: construct, score, points, scramble,
// estimate, reproduce-table, find-modulus.
//
// Exit codes: 0 success, 2 configuration error, 3 input-file error, 1 for
// anything unexpected.

#include <iosfwd>
#include <string>
#include <vector>

namespace plr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInput = 3;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plr
