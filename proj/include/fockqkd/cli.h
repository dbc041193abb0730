#pragma once

#include <iosfwd>
#include <string>

namespace fockqkd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

std::string tool_version();

// Entry point of the fockqkd tool. Results go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fockqkd
