#include <iostream>
#include <string>
#include <vector>

#include "cjsr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cjsr::cli::run(args, std::cout, std::cerr);
}
