#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace daelti::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,          // unreadable file, malformed JSON, shape mismatch, bad flag
  kNotStabilizable = 2,
  kInconsistentInitial = 3,
  kNumericalFailure = 4,    // any other solver failure
};

/// Parses the arguments (without the program name) and runs one
/// subcommand. Results go to `out`, one-line diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace daelti::cli
