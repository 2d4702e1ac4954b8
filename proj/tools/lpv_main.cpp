#include "lpv/cli.hpp"

int main(int argc, char** argv) { return lpv::cli::run_main(argc, argv); }
