#include "sdr/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sdr::run_cli(argc, argv, std::cout, std::cerr); }
