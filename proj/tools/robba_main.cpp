#include <iostream>
#include <string>
#include <vector>

#include "robba/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const robba::CommandResult r = robba::run_command(args, std::cin);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
