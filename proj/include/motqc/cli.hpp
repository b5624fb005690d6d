// cli.hpp
#ifndef MOTQC_CLI_HPP
#define MOTQC_CLI_HPP

#include <iosfwd>

namespace motqc {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitUsage = 2 };

/// Entry point of the `motqc` tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace motqc

#endif  // MOTQC_CLI_HPP
