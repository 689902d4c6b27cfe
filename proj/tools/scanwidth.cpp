#include "scanwidth/cli.hpp"

int main(int argc, char** argv) { return scanwidth::cli::run_main(argc, argv); }
