#include <iostream>

#include "stopir/cli/commands.hpp"

int main(int argc, char** argv) {
    return stopir::cli::run(argc, argv, std::cout, std::cerr);
}
