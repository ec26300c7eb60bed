#include "siting/cli.hpp"

int main(int argc, char** argv) {
    return siting::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
