#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bosonic {

/**
 * Runs one command line (without the program name). Returns 0 on success,
 * 1 when a check fails and 2 on usage errors.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bosonic
