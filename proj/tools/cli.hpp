#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ktk::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,  // bad flags, parameters, or files
  kBudget = 3,
  kDecrypt = 4,
  kAttackFailed = 5,
};

/// Runs one ktk command. `args` excludes the program name. Reports go to
/// `out`, progress lines and error objects to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ktk::cli
