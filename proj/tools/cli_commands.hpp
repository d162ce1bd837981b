#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tomeria::cli {

enum ExitCode : int { kOk = 0, kUnsatisfied = 1, kUsage = 2 };

/// Entire command line, argv[0] included. Output goes to `out`, diagnostics
/// to `err`; nothing touches the process streams directly.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tomeria::cli
