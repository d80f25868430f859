#include <iostream>
#include <string>
#include <vector>

#include "mamab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return mamab::run_cli(args, std::cerr);
}
