#pragma once

#include <ostream>

namespace instanton::cli {

// Exit codes: 0 success, 1 failed verification or numerical failure, 2 bad arguments.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace instanton::cli
