#include <iostream>
#include <string>
#include <vector>

#include "lfold/cli.hpp"

int main(int argc, char** argv) {
  return lfold::cli::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
