#include <iostream>

#include "swperc/cli.hpp"

int main(int argc, char** argv) { return swperc::run_cli(argc, argv, std::cout, std::cerr); }
