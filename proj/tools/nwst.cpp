#include <iostream>
#include <string>
#include <vector>

#include "nwst/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return nwst::run_command(args, std::cout, std::cerr);
}
