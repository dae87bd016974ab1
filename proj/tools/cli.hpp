#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace peermatch::cli {

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 validation or usage error, 2 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace peermatch::cli
