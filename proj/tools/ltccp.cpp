#include <iostream>
#include <string>
#include <vector>

#include "ltccp/cli/pipeline.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ltccp::cli::run_cli(args, std::cout, std::cerr);
}
