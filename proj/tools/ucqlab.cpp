#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return ucq::cli::run(argc, argv, std::cout, std::cerr); }
