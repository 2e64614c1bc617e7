#include <iostream>

#include "hhf/commands.hpp"

int main(int argc, char** argv) {
  return hhf::cli::run(argc, argv, std::cout, std::cerr);
}
