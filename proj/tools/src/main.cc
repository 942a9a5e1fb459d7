#include <iostream>

#include "vizplan_cli/commands.h"

int main(int argc, char** argv) {
  return vizplan::cli::run_cli(argc, argv, std::cout, std::cerr);
}
