#include <iostream>
#include <string>
#include <vector>

#include "boksim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return boksim::cli::run(args, std::cout, std::cerr);
}
