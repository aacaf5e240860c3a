#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace percolab::cli {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRefused = 3;

/// Runs one subcommand. `args` excludes the program name. Data goes to `out`
/// unless --out is given, in which case the payload and its manifest are
/// written to disk.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace percolab::cli
