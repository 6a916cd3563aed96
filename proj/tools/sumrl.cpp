#include <iostream>

#include "sumrl/cli.hpp"

int main(int argc, char** argv) { return sumrl::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
