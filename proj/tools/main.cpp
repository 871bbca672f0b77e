#include <iostream>

#include "romscale/cli.hpp"

int main(int argc, char** argv) {
  return romscale::main_entry({argv + 1, argv + argc}, std::cout, std::cerr);
}
