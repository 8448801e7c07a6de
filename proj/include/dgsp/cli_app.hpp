#pragma once

#include <string>
#include <vector>

namespace dgsp {

/// CLI entry point; argv[0] is the program name. Exit codes: 0 success,
/// 1 invalid input, 2 numerical failure.
int cli_main(int argc, const char* const* argv);

/// Convenience overload for tests; pass arguments without the program name.
int cli_main(const std::vector<std::string>& args);

}  // namespace dgsp
