#include <iostream>

#include "xsgen/cli.hpp"

int main(int argc, char** argv) {
    return xsgen::run_cli(argc, argv, std::cout, std::cerr);
}
