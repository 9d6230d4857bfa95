#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nodalab::app {

/// Runs one command line (without the program name). Returns the exit code:
/// 0 ok, 2 numeric failure, 3 configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nodalab::app
