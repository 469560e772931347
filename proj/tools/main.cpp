#include <iostream>

#include "indde/cli.hpp"

int main(int argc, char** argv) { return indde::run_cli(argc, argv, std::cout, std::cerr); }
