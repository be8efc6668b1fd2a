#pragma once

#include <string>
#include <vector>

namespace smav {

/// Command-line entry point. `args` excludes the program name.
/// Exit status: 0 success, 1 validation/usage failure, 2 solver failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace smav
