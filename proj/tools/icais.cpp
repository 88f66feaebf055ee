#include <iostream>

#include "icais/cli.hpp"

int main(int argc, char** argv) {
  return icais::cli::run(argc, argv, std::cout, std::cerr);
}
