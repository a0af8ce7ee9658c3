#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cgs {

// Runs the command-line tool on `args` (program name excluded).  Exit codes:
// 0 true/success, 1 false/diagnostics, 2 input error, 3 resource cap.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace cgs
