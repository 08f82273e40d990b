#pragma once
// Command-line front end: dynatrack track|sweep|events|render|generate|oracle.

#include <iosfwd>
#include <string>
#include <vector>

namespace dynatrack {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_invalid = 2,
    exit_io = 3,
};

/// `argv[0]` is the program name. Results go to `out` unless an output
/// file is given; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with arguments following the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynatrack
