#include <iostream>
#include <string>
#include <vector>

#include "sememe_kb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sememe_kb::run_cli(args, std::cout, std::cerr);
}
