#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nbfit::cli {

// Full command-line surface, callable in-process for tests. args excludes
// the program name. Returns the process exit code: 0 success, 1 usage,
// 2 data/domain error, 3 precision/structural error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nbfit::cli
