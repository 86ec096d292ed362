#include "prcf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return prcf::run_cli(argc, argv, std::cout, std::cerr);
}
