#include <iostream>

#include "brt_cli.hpp"

int main(int argc, char** argv) { return brt::cli::run(argc, argv, std::cout, std::cerr); }
