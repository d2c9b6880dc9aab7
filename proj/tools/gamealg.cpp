#include <iostream>
#include <string>
#include <vector>

#include "gamealg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gamealg::run_cli(args, std::cout, std::cerr);
}
