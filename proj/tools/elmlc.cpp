#include <iostream>

#include "elmlc/cli.hpp"

int main(int argc, char** argv) { return elmlc::run(argc, argv, std::cout, std::cerr); }
