#include <iostream>

#include "bellman_lab/cli.hpp"

int main(int argc, char** argv) { return bellman_lab::cli::run(argc, argv, std::cout, std::cerr); }
