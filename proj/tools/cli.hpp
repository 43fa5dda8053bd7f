#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ratecount::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kInsufficientData = 2,
};

/// Runs the command line `args` (without the program name). Input named "-"
/// is read from `in`; results go to `out` unless redirected with -o.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace ratecount::cli
