#include "esnrae/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return esnrae::run_cli(argc, argv, std::cout, std::cerr); }
