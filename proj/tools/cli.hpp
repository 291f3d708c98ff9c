#pragma once

#include <iosfwd>

namespace ebk {

/// Runs the command line. Returns 0 on success, 2 for invalid input and 3
/// when a numerical method fails. Results go to `out` unless --out is given.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ebk
