// Experiment runner; subcommands are filled in per module.
#include <iostream>

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::cerr << "lab: not yet wired\n";
    return 64;
}
