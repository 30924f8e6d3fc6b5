#include <vector>

#include "lbd/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lbd::cli::run(args);
}
