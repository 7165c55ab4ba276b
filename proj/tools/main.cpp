#include "cryospike/cli.hpp"

int main(int argc, char** argv) { return cryospike::cli_main(argc, argv); }
