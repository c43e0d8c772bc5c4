#include <iostream>

#include "billiards/commands.hpp"

int main(int argc, char** argv) {
    return billiards::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
