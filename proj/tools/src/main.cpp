#include <iostream>

#include "cuspsieve_cli/cli.hpp"

int main(int argc, char** argv) {
  return cuspsieve::cli::run(argc, argv, std::cout, std::cerr);
}
