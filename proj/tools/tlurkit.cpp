#include <iostream>

#include "tlurkit/cli.hpp"

int main(int argc, char** argv) {
    return tlurkit::cli_main(argc, argv, std::cout, std::cerr);
}
