#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qpmut::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kWitness = 2, kInconclusive = 3 };

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace qpmut::cli
