#include <iostream>

#include "lawtrace/cli.hpp"

int main(int argc, char** argv) { return lawtrace::cli::run(argc, argv, std::cout, std::cerr); }
