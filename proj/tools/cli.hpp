#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nullcode {

// Runs one command line (without the program name). Returns 0 on success,
// 1 when a checked property fails and 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nullcode
