#include <iostream>
#include <string>
#include <vector>

#include "roughsde/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return roughsde::dispatch(args, std::cout, std::cerr);
}
