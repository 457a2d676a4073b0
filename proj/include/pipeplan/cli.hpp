#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pipeplan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitUsage = 64;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

std::string version();

}  // namespace pipeplan::cli
