#include <iostream>

#include "lra/cli.hpp"

int main(int argc, char** argv) { return lra::cli::run(argc, argv, std::cout, std::cerr); }
