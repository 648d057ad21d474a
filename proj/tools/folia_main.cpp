#include <iostream>

#include "folia/cli.hpp"

int main(int argc, char** argv) {
    return folia::cli::dispatch(argc, argv, std::cout, std::cerr);
}
