#include "conduit/cli.hpp"

int main(int argc, char** argv) { return conduit::cli_main(argc, argv); }
