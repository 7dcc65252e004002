#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hybrid {

/// Command-line driver. `args` excludes the program name.
/// Returns 0 on success, 1 on a failed reproduction or computation error,
/// 2 on usage or configuration errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hybrid
