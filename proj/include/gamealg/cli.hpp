// Command-line front end.  Exit codes: 0 success (equivalent, valid),
// 1 negative result, 2 usage or input error.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gamealg {

/// Environment variable holding the default state budget for lts, eq,
/// linearize and cfar.
inline constexpr const char* kMaxStatesEnv = "GAMEALG_MAX_STATES";

/// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gamealg
