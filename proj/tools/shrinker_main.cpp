#include "shrinker/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return shrinker::cli_main(std::vector<std::string>(argv, argv + argc), std::cerr);
}
