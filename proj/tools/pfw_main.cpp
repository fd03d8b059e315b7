#include <iostream>

#include "pfw/cli.hpp"

int main(int argc, char** argv) { return pfw::run_cli(argc, argv, std::cout, std::cerr); }
