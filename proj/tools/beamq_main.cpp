#include <iostream>

#include "beamq/cli.hpp"

int main(int argc, char** argv) {
  return beamq::cli::main_entry(argc, argv, std::cout, std::cerr);
}
