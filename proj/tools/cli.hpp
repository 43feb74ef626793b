#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace farpoint::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kPrecondition = 2,
  kInconclusive = 3,
  kCheckFailed = 4,
};

/// Runs one command. `args` excludes the program name. The structured record
/// goes to `out` as a single JSON line; human-readable text goes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace farpoint::cli
