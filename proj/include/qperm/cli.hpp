#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qperm::cli {

// Exit codes shared by every subcommand.
inline constexpr int kAffirmative = 0;
inline constexpr int kNegative = 1;
inline constexpr int kError = 2;

/// Runs the `qperm` command line. Artifacts go to --out when given, else to
/// `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace qperm::cli
