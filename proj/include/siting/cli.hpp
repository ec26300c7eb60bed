#pragma once

#include <string>
#include <vector>

namespace siting::cli {

// Runs one subcommand; args exclude the program name. Returns the process
// exit status: 0 ok, 2 config or flag error, 3 stage error, 4 solver budget
// exhausted. Used by the binary's main() and called directly from tests.
int run(std::vector<std::string> args);

}  // namespace siting::cli
