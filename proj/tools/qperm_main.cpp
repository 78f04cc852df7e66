#include "qperm/cli.hpp"

int main(int argc, char** argv) {
    return qperm::cli::main(argc, argv);
}
