#include <iostream>

#include "lospace_cli.hpp"

int main(int argc, char** argv) { return lospace::cli::run(argc, argv, std::cout, std::cerr); }
