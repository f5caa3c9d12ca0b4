#include <iostream>
#include <string>
#include <vector>

#include "zero/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zero::run_cli(args, std::cout, std::cerr);
}
