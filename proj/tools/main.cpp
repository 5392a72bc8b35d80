#include <iostream>

#include "dhj/cli.hpp"

int main(int argc, char** argv) { return dhj::cli::run(argc, argv, std::cout, std::cerr); }
