#pragma once

// Command-line front end. Exit codes: 0 success, 1 validation or numerical
// failure, 2 usage error.

#include <iosfwd>
#include <string>
#include <vector>

namespace cpat {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name. Artifacts without --out go to `out`,
/// diagnostics to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace cpat
