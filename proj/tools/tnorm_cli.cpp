#include <iostream>

#include "tnorm/cli.hpp"

int main(int argc, char** argv) { return tnorm::run_cli(argc, argv, std::cout, std::cerr); }
