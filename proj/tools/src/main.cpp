#include <iostream>
#include <string>
#include <vector>

#include "riscnoma_tools/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return riscnoma::cli::cli_main(args, std::cout, std::cerr);
}
