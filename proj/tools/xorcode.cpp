#include <iostream>

#include "xorcode/cli.hpp"

int main(int argc, char** argv) { return xorcode::cli::run(argc, argv, std::cout, std::cerr); }
