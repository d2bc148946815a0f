#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace layerlab::cli {

enum ExitCode { kOk = 0, kUsage = 1, kParse = 2, kInfeasible = 3, kTransport = 4 };

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace layerlab::cli
