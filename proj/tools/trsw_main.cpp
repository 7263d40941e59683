#include "trsw/cli.hpp"

int main(int argc, char **argv) { return trsw::cli::main(argc, argv); }
