#include "reposer/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return reposer::runCli(argc, argv, std::cout, std::cerr);
}
