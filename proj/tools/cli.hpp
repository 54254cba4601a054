#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emgstand::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitConvergence = 4;

/// Runs one command line (args excludes the program name). Results go to
/// `out` or to the files named by flags; the run log and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emgstand::cli
