#include <vector>
#include <string>

#include "paneltail/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return paneltail::run_cli(std::move(args));
}
