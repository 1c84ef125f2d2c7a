#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cryptompress::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIntegrity = 2, kIoOrFormat = 3 };

// Runs one command line (args excludes the program name). Diagnostics go to
// `err`, normal output to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cryptompress::cli
