#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imra::cli {

/// Exit statuses of the imra tool.
enum Exit : int { kOk = 0, kValidation = 1, kIo = 2 };

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imra::cli
