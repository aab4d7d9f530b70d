#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ocds::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the `ocds` binary and the tests. `args` excludes
/// the program name.
int main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace ocds::cli
