#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rilab::cli {

/// Exit codes: 0 ok or within tolerance, 1 usage/input error, 2 outside tolerance.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitOutside = 2;

/// Parses args (without the program name) and runs one subcommand. Data go to
/// --output (written atomically) or `out`; the one-line summary and any
/// errors go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_main(int argc, char** argv);

}  // namespace rilab::cli
