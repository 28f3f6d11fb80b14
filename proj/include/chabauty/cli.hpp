#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chabauty::cli {

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 when a domain error was reported, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chabauty::cli
