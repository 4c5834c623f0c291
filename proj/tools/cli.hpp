#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace grimm::cli {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_found = 1;  // a verification found a counterexample or mismatch
inline constexpr int exit_usage = 2;  // bad flags, infeasible limits, resource errors

// Runs one subcommand. `args` excludes the program name. Results go to
// `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace grimm::cli
