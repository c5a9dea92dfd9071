#include <iostream>

#include "rnimpute/cli.hpp"

int main(int argc, char** argv) { return rnimpute::cli::run(argc, argv, std::cout, std::cerr); }
