#include <iostream>

#include "swing/cli.hpp"

int main(int argc, char** argv) { return swing::cli_main(argc, argv, std::cout, std::cerr); }
