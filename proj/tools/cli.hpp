#pragma once

#include <string>
#include <vector>

namespace spdtraj::cli {

// Runs the command line `args` (without the program name); returns the exit
// code. Diagnostics go to stderr.
int run(const std::vector<std::string>& args);

}  // namespace spdtraj::cli
