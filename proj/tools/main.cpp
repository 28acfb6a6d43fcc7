#include <iostream>
#include <string>
#include <vector>

#include "rldp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rldp::run(args, std::cout, std::cerr);
}
