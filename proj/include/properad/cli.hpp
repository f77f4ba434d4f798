#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace properad::cli {

// Exit codes of the command-line front end.
enum ExitCode : int {
  success = 0,
  check_failed = 1,  // a check found violations; the report lists witnesses
  input_error = 2,   // unreadable or malformed input, bad usage
};

// Runs one command.  args excludes the program name.  Reports go to `out`,
// diagnostics to `err`.  The default bound is read from PROPERAD_KIT_BOUND
// when set (else 4).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace properad::cli
