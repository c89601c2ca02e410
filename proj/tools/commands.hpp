#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bu/error.hpp"

namespace bu::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;  // bad flags or violated constraint
inline constexpr int kExitIo = 3;     // I/O or file-format error

int exit_code_for(ErrorCode code);

/// Runs `bu <subcommand> ...`; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same as above with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bu::cli
