#pragma once

#include <string>
#include <vector>

namespace dspls::cli {

/// Exit codes: 0 success, 2 usage, 3 I/O, 4 numeric/solver.
int run(std::vector<std::string> args);
int run(int argc, const char* const* argv);

}  // namespace dspls::cli
