#include <iostream>

#include "mslab/cli/commands.hpp"

int main(int argc, char** argv) {
  return mslab::cli::main_entry(argc, argv, std::cout, std::cerr);
}
