#pragma once

#include <iosfwd>

namespace tkl::cli {

// Exit codes of the tkl-meanfield driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadArguments = 1;
inline constexpr int kExitPartialFailure = 2;
inline constexpr int kExitIo = 3;

// Entry point of the command-line driver; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tkl::cli
