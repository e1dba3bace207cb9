#include "dspls/cli.hpp"

int main(int argc, char** argv) { return dspls::cli::run(argc, argv); }
