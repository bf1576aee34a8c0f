#include "dflat/cli.hpp"

int main(int argc, char **argv) { return dflat::cli::run_cli(argc, argv); }
