#include <iostream>

#include "seisfault/cli.hpp"

int main(int argc, char** argv) { return seisfault::run_cli(argc, argv, std::cout, std::cerr); }
