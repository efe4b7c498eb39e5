#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tmnet::cli {

// Entry point behind the `tmnet` binary; `args` excludes the program name.
// Results go to `out`, diagnostics to `err`. Returns the exit status:
// 0 on success, 1 on errors and divergences, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace tmnet::cli
