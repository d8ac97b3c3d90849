#pragma once

#include <iosfwd>

namespace psewer {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitIo = 2,
    kExitMismatch = 3,
};

/// Entry point of the `psewer` tool:
///
///   psewer simulate <scenario> [--override key=value]... [--out DIR] [--seed N] [--quiet]
///   psewer experiment <scenario> [--override key=value]... [--out DIR] [--seed N] [--quiet]
///   psewer compare <dirA> <dirB>
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace psewer
