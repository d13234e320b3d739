#include <iostream>

#include "gaugeqpe/cli.hpp"

int main(int argc, char** argv) { return gaugeqpe::cli::run(argc, argv, std::cout, std::cerr); }
