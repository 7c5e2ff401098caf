#include <iostream>

#include "beanlab/cli/commands.hpp"

int main(int argc, char** argv) { return beanlab::cli::run_cli(argc, argv, std::cout, std::cerr); }
