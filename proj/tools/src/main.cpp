#include <iostream>

#include "cpufp_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cpufp::cli::run(args, std::cout, std::cerr);
}
