#include <iostream>

#include "symcap/cli.hpp"

int main(int argc, char** argv) { return symcap::cli::dispatch(argc, argv, std::cout, std::cerr); }
