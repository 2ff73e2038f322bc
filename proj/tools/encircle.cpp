#include <iostream>

#include "encircle/cli.hpp"

int main(int argc, char** argv) {
  return encircle::run_cli(argc, argv, std::cout, std::cerr);
}
