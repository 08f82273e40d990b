#include <iostream>

#include "dynatrack/cli.hpp"

int main(int argc, char** argv) {
    return dynatrack::run_cli(argc, argv, std::cout, std::cerr);
}
