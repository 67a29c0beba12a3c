#include <iostream>
#include <string>
#include <vector>

#include "pinsker/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pinsker::cli::run(args, std::cin, std::cout, std::cerr);
}
