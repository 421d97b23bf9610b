#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdpc {

// Runs one CLI invocation; argv excludes the program name. Errors print one
// "error: <code>: <message>" line on err and return a nonzero status.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace mdpc
