#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmcs {

// Whole command-line tool behind a testable entry point.
// Exit codes: 0 success, 1 usage, 2 input file, 3 numerical or constraint.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace dmcs
