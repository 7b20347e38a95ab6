#include <iostream>

#include "kuranishi/cli.hpp"

int main(int argc, char** argv) { return kur::cli::main(argc, argv, std::cout, std::cerr); }
