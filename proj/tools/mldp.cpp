#include <iostream>

#include "mldp/cli.hpp"

int main(int argc, char** argv) { return mldp::run_cli(argc, argv, std::cout, std::cerr); }
