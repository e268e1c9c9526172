#include <iostream>

#include "ffsieve/cli.hpp"

int main(int argc, char** argv) {
  return ffsieve::cli::main_entry(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
