#include "vfsim/cli.hpp"

int main(int argc, char** argv) { return vfsim::cli::main_entry(argc, argv); }
