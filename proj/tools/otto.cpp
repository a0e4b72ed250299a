#include <iostream>

#include "otto/cli/commands.hpp"

int main(int argc, char** argv) {
    return otto::cli::run(argc, argv, std::cout, std::cerr);
}
