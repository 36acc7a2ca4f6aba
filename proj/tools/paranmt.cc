#include <iostream>
#include <string>
#include <vector>

#include "paranmt/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return paranmt::Run(args, std::cout, std::cerr);
}
