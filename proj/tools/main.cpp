#include "snspm/cli.hpp"

int main(int argc, char** argv) {
    return snspm::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
