#include "omlprob/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return omlprob::cli::run(args, std::cout, std::cerr, OMLPROB_FIXTURE_DIR);
}
