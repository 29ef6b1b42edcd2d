#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Run one `gsa` invocation. `args` excludes the program name. Diagnostics
/// go to `err` as a single line; `out` gets informational output.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gsa::cli
