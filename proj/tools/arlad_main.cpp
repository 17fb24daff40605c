#include "arlad/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return arlad::run_cli(argc, argv, std::cout, std::cerr); }
