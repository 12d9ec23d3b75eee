#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "roughsde/error.hpp"

namespace roughsde {

// Runs the command line `args` (without the program name) and returns the
// process exit code: 0 success, 2 invalid configuration, 3 numerical
// failure, 4 I/O error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int exit_code_for(const Error& error);

}  // namespace roughsde
