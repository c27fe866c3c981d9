#include <iostream>

#include "gsgdm/harness.hpp"

int main(int argc, char** argv) { return gsgdm::cli_main(argc, argv, std::cout, std::cerr); }
