#pragma once

#include <iosfwd>

namespace depthcur {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;       // I/O, parse or configuration problem
inline constexpr int kExitValidation = 2;  // a check ran and failed

/// Entry point for the `depthcur` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace depthcur
