#include <iostream>

#include "devkit/cli.hpp"

int main(int argc, char** argv) { return devkit::run_cli(argc, argv, std::cout, std::cerr); }
