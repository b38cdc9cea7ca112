#include <iostream>
#include <string>
#include <vector>

#include "tribes/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return tribes::cli::run(args, std::cout, std::cerr);
}
