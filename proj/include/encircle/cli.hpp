#pragma once

#include <iosfwd>

namespace encircle {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,  // also usage errors
  kExitNumericalAbort = 3,
  kExitOutputError = 4,
};

/// encircle run <cfg> [--out DIR] [--seed N] [--dt X]
/// encircle sweep <cfg> --param NAME --values CSVLIST [--out DIR]
/// encircle check <cfg>
/// The output directory defaults to $ENCIRCLE_OUT, then "out".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace encircle
