#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pvc::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 2,
    kBudgetExhausted = 3,
};

/// Runs one invocation. `args` excludes the program name. JSON goes to `out`,
/// human-readable notes and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pvc::cli
