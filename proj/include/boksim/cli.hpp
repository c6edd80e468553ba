#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace boksim::cli {

// Runs one subcommand. args[0] is the program name. Returns 0 on success,
// 1 on validation failures (bad flags, malformed inputs), 2 on runtime failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boksim::cli
