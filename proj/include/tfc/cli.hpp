#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tfc::cli {

inline constexpr const char* kToolName = "enantio-tfc";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
    Success = 0,
    ConfigFailure = 1,
    GapClosingFailure = 2,
    NumericalFailure = 3,
};

/// Entry point behind the executable; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tfc::cli
