#include <iostream>

#include "rigidgas/cli.hpp"

int main(int argc, char** argv) { return rigidgas::run_cli(argc, argv, std::cout, std::cerr); }
