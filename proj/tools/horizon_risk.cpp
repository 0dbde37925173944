#include <iostream>

#include "horizon/cli.hpp"

int main(int argc, char** argv) { return horizon::main_entry(argc, argv, std::cout, std::cerr); }
