#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apollo {

// Command-line frontend. `args` excludes the program name. Reports go to
// `out` as JSON, diagnostics to `err`. Returns the process exit code:
// 0 = pass, 1 = a verification ran and failed, 2 = input or degeneracy error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apollo
