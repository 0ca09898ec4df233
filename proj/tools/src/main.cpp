#include <iostream>

#include "reclab_cli/cli.hpp"

int main(int argc, char** argv) {
  return reclab::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
