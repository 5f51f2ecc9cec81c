#include <iostream>

#include "dioph/cli.hpp"

int main(int argc, char** argv) { return dioph::run_cli(argc, argv, std::cout, std::cerr); }
