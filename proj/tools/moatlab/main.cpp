#include <iostream>

#include "moatlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return moatlab::run_cli(args, std::cout, std::cerr);
}
