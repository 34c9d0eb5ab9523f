#include <iostream>

#include "doeblin/cli.hpp"

int main(int argc, char** argv) { return doeblin::run_cli(argc, argv, std::cout, std::cerr); }
