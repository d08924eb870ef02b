#pragma once
// Command-line surface. run() parses argv-style arguments and executes one of
// the subcommands (verify, attack, solve, reduce, gen, xcheck), writing a
// RunReport to `out` and diagnostics to `err`.
//
// Exit status contract: 0 = decided / all checks pass, 1 = decided-negative
// (FAILS, NO, or any cross-check failure), 2 = UNKNOWN or refusal,
// 3 = input error, 4 = internal error.

#include <iosfwd>
#include <string>
#include <vector>

namespace mmkp::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmkp::cli
