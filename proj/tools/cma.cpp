#include <iostream>

#include "cma/cli/dispatch.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cma::cli::cli_dispatch(args, std::cout, std::cerr);
}
