#pragma once

#include <string>
#include <vector>

namespace shiftconv {

// Dispatches the command line. Exit codes: 0 success / all checks pass,
// 1 verification failure (failing identity named on stderr), 2 usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace shiftconv
