#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dualgeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

/// Runs one command line (args excludes the program name). Results go to
/// `out` or to --output; diagnostics go to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dualgeo::cli
