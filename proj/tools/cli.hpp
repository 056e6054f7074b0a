#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace formcalc::cli {

enum ExitCode : int { kOk = 0, kFail = 1, kUsage = 2, kNumeric = 3 };

/// Runs one command line (without the program name); returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace formcalc::cli
