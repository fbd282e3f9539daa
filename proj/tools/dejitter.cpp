#include <iostream>

#include "dejitter/cli.hpp"

int main(int argc, char** argv) { return dejitter::cli::run(argc, argv, std::cout, std::cerr); }
