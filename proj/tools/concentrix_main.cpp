#include <iostream>

#include "concentrix/cli.hpp"

int main(int argc, char** argv) { return concentrix::run_cli(argc, argv, std::cout, std::cerr); }
