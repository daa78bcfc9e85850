#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robba {

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Runs one command line (program name excluded). Exit codes: 0 success,
/// 1 domain error, 2 parse or usage error; failures put a JSON error object
/// on `err`. `in` backs every "-" path.
CommandResult run_command(const std::vector<std::string>& args, std::istream& in);

}  // namespace robba
