#include "vwslab/cli.hpp"

int main(int argc, char** argv) { return vwslab::cli_main(argc, argv); }
