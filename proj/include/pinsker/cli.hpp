#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pinsker::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitVerificationFailed = 2;

/// Runs one subcommand. `args` excludes the program name. Results go to `out`,
/// diagnostics and usage text to `err`; `in` backs distribution arguments
/// given as "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pinsker::cli
