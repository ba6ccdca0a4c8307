#pragma once

// Command-line front end. Exit codes: 0 success, 2 usage or input error,
// 3 numerical failure.

#include <iosfwd>

namespace tnorm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tnorm
