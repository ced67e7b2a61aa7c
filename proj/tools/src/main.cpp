#include <iostream>

#include "qpmut/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return qpmut::cli::run({argv + 1, argv + argc}, std::cin, std::cout, std::cerr);
}
