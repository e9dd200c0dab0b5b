#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return icgb::cli::run(argc, argv, std::cout, std::cerr);
}
