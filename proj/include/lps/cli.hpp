#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lps::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2, kTimeout = 3 };

// Environment variable naming the default cache file.
inline constexpr const char* kCacheEnv = "LPS_CACHE";

// Runs one command line (args excludes the program name). Reports go to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lps::cli
