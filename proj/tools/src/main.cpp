#include "consgain/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return consgain::cli::run(argc, argv, std::cout, std::cerr);
}
