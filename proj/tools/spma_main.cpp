#include <iostream>
#include <string>
#include <vector>

#include "spma/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return spma::cli_main(args, std::cout, std::cerr);
}
