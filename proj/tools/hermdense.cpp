#include <iostream>

#include "hermdense/cli.hpp"

int main(int argc, char** argv) {
    return hermdense::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
