#include "rilab/cli.hpp"

int main(int argc, char** argv) { return rilab::cli::run_main(argc, argv); }
