#include "cpat/cli.hpp"

int main(int argc, char** argv) { return cpat::cli_main(argc, argv); }
