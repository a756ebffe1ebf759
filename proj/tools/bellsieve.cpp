#include <iostream>

#include "bellsieve/cli.hpp"

int main(int argc, char** argv) { return bellsieve::cli::run_cli(argc, argv, std::cout, std::cerr); }
