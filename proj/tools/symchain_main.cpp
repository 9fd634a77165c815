#include "symchain/cli.hpp"

int main(int argc, char** argv) {
    return symchain::cli::main_entry(argc, argv);
}
