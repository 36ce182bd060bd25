#include <cstdlib>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return brownflow::cli::run_cli(argc, argv, std::cout, std::cerr, std::getenv("BROWNFLOW_SEED"));
}
