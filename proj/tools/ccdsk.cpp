#include <iostream>

#include "ccdsk/cli.hpp"

int main(int argc, char** argv) {
  return ccdsk::cli::run(argc, argv, std::cout, std::cerr);
}
