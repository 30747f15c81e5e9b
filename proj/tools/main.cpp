#include <iostream>

#include "cli_frontend.hpp"

int main(int argc, char** argv) { return hybridpir::cli::main(argc, argv, std::cout, std::cerr); }
