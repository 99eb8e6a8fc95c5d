#include <iostream>

#include "wiener/cli.hpp"

int main(int argc, char** argv) { return wiener::cli_main(argc, argv, std::cout, std::cerr); }
