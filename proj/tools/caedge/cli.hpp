#pragma once

#include <ostream>
#include <span>
#include <string>

namespace caedge::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,        ///< bad arguments, unreadable input, shape mismatch
    kInputFormat = 3,  ///< malformed PNM
};

/// Runs one invocation. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace caedge::cli
