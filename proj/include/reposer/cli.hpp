#pragma once

#include <iosfwd>

namespace reposer {

/// Process exit codes of the command-line tool.
enum class ExitCode : int {
  Success = 0,
  ValidationError = 1,
  IoError = 2,
  /// Finished, but some landmarks fell outside the canvas and were clamped.
  OutOfCanvas = 3,
};

/// Runs one command line (argv[0] is the program name). Diagnostics go to
/// `err`, results to `out` or to the files named on the command line.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace reposer
