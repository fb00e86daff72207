#include <iostream>

#include "zeroone/cli.hpp"

int main(int argc, char** argv) { return zeroone::cli::run(argc, argv, std::cout, std::cerr); }
