#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace degmap {

/// Runs one degmap subcommand. Exit codes: 0 success, 1 domain error (with a
/// machine-readable JSON error object on the error stream), 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

int run_cli(int argc, const char* const* argv);

}  // namespace degmap
