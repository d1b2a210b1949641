#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prosokit::cli {

/// Run one CLI invocation. args excludes the program name. Returns the
/// process exit code: 0 success, 1 usage/configuration error, 2 data error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace prosokit::cli
