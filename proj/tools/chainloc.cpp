#include <iostream>
#include <string>
#include <vector>

#include "chainloc/cli.hpp"

int main(int argc, char** argv) {
  return chainloc::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
