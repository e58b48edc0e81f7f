#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hermdense/error.hpp"

namespace hermdense {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitIdentityFailure = 1,
    kExitInput = 2,
    kExitNotStabilized = 3,
    kExitSplitClass = 4,
    kExitBudget = 5,
};

int exit_code_for(ErrorKind kind);

/// Runs the tool on argv-style arguments (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hermdense
