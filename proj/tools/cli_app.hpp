#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvqkd::cli {

enum ExitCode : int { kSuccess = 0, kError = 1, kInsecure = 2 };

/// Runs one command line (args excludes the program name). Results go to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvqkd::cli
