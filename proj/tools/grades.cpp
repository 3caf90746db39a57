#include <iostream>

#include "grades/cli.hpp"

int main(int argc, char** argv) { return grades::cli::run(argc, argv, std::cout, std::cerr); }
