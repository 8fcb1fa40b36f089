#include <iostream>

#include "deltaspec/cli.hpp"

int main(int argc, char** argv) { return deltaspec::cli::dispatch(argc, argv, std::cout, std::cerr); }
