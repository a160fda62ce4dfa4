#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eigml::cli {

/// Runs one CLI invocation. `args` excludes the program name. Normal output
/// goes to `out`; every failure writes a single-line diagnostic to `err` and
/// returns a non-zero exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eigml::cli
