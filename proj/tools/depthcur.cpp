#include "depthcur/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return depthcur::run_cli(argc, argv, std::cout, std::cerr); }
