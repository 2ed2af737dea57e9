#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psup::cli {

/// Runs the command line given args (program name excluded), writing to
/// the supplied streams. Returns the process exit code: 0 success, 2 for
/// validation/usage errors, 1 for internal numerical failures.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace psup::cli
