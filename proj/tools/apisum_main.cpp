#include <iostream>
#include <string>
#include <vector>

#include "apisum/pipeline.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return apisum::run_cli(args, std::cout, std::cerr);
}
