#pragma once

#include <string>
#include <vector>

namespace talkmix {

// Entry point behind the talkmix binary. Returns the process exit code:
// 0 success, 1 usage error, 2 data error.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

} // namespace talkmix
