#include <iostream>

#include "nlocal/cli.hpp"

int main(int argc, char** argv) { return nlocal::run_cli(argc, argv, std::cout, std::cerr); }
