#include <iostream>

#include "motqc/cli.hpp"

int main(int argc, char** argv) { return motqc::run_cli(argc, argv, std::cout, std::cerr); }
