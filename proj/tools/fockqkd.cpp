#include <iostream>

#include "fockqkd/cli.h"

int main(int argc, char** argv) { return fockqkd::run_cli(argc, argv, std::cout, std::cerr); }
