#include <iostream>

#include "gsr/cli.hpp"

int main(int argc, char** argv) {
    return gsr::cli::run_cli(argc, argv, std::cout, std::cerr);
}
