#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace casimir::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kBadArguments = 2,
  kNumericalFailure = 3,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace casimir::cli
